use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use foxwright::inequalities::{Exploration, InequalityReport};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Shortest round-trip decimal for moderate magnitudes, exponent form otherwise.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// JSON numbers for finite values, strings for NaN and ±inf.
fn jnum(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(format!("{x}"))
    }
}

pub fn sink(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn csv_err(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

pub fn write_reports(w: &mut dyn Write, fmt: Format, seed: u64, suite: &str, rows: &[InequalityReport]) -> io::Result<()> {
    match fmt {
        Format::Csv => {
            writeln!(w, "# seed={seed}")?;
            let mut c = csv::Writer::from_writer(&mut *w);
            c.write_record(["suite_id", "params_json", "z", "lhs", "rhs", "margin", "err_estimate", "pass"])
                .map_err(csv_err)?;
            for r in rows {
                c.write_record([
                    r.suite_id.clone(),
                    r.params_echo.to_string(),
                    r.z.render(),
                    num(r.lhs),
                    num(r.rhs),
                    num(r.margin),
                    num(r.err_estimate),
                    r.verdict.as_str().to_string(),
                ])
                .map_err(csv_err)?;
            }
            c.flush()?;
        }
        Format::Json => {
            let reports: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "suite_id": r.suite_id,
                        "params": r.params_echo,
                        "z": r.z.render(),
                        "lhs": jnum(r.lhs),
                        "rhs": jnum(r.rhs),
                        "margin": jnum(r.margin),
                        "err_estimate": jnum(r.err_estimate),
                        "pass": r.verdict.as_str(),
                    })
                })
                .collect();
            let doc = json!({ "seed": seed, "suite": suite, "reports": reports });
            serde_json::to_writer_pretty(&mut *w, &doc)?;
            writeln!(w)?;
        }
    }
    w.flush()
}

pub fn write_explorations(w: &mut dyn Write, fmt: Format, seed: u64, suite: &str, rows: &[Exploration]) -> io::Result<()> {
    match fmt {
        Format::Csv => {
            writeln!(w, "# seed={seed}")?;
            let mut c = csv::Writer::from_writer(&mut *w);
            c.write_record(["suite_id", "params_json", "z_grid", "verdict", "increases", "decreases", "min_step", "max_step"])
                .map_err(csv_err)?;
            for e in rows {
                c.write_record([
                    e.suite_id.clone(),
                    e.params_echo.to_string(),
                    e.z_grid.render(),
                    e.verdict.clone(),
                    e.increases.to_string(),
                    e.decreases.to_string(),
                    num(e.min_step),
                    num(e.max_step),
                ])
                .map_err(csv_err)?;
            }
            c.flush()?;
        }
        Format::Json => {
            let reports: Vec<Value> = rows
                .iter()
                .map(|e| {
                    json!({
                        "suite_id": e.suite_id,
                        "params": e.params_echo,
                        "z_grid": e.z_grid.render(),
                        "verdict": e.verdict,
                        "increases": e.increases,
                        "decreases": e.decreases,
                        "min_step": jnum(e.min_step),
                        "max_step": jnum(e.max_step),
                    })
                })
                .collect();
            let doc = json!({ "seed": seed, "suite": suite, "reports": reports });
            serde_json::to_writer_pretty(&mut *w, &doc)?;
            writeln!(w)?;
        }
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(0.0), "0");
        assert_eq!(num(2.5), "2.5");
        assert_eq!(num(-1e-7), "-1e-7");
        assert_eq!(num(3e20), "3e20");
        assert_eq!(num(f64::NAN), "NaN");
    }
}
