//! `foxwright`: evaluate Fox–Wright functions, check inequality suites over
//! parameter grids, sweep margins to CSV/JSON and run the exploration probes.
//!
//! Exit codes: 0 all pass, 1 inequality violation, 2 usage error, 3 numerical failure.

mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use foxwright::inequalities::{
    explore_instances, run_instances, sample, suite, Checker, FastEvaluator, GridSpec, HpEvaluator, InequalityReport,
    Instance, Summary, Tolerance, Verdict, GRID_POINTS,
};
use foxwright::series::{self, TailSpec};
use foxwright::{Config, Error, Evaluation, Params};
use output::{num, sink, write_explorations, write_reports, Format};

#[derive(Parser)]
#[command(name = "foxwright", version, about = "Fox–Wright function evaluation and inequality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function at one point.
    Eval(EvalArgs),
    /// Run an inequality suite; the exit code reflects the verdicts.
    Check(RunArgs),
    /// Like check, but always exits 0 once the report is written.
    Sweep(RunArgs),
    /// Run an exploration probe (problem1-kn, problem2-xi) and report monotonicity verdicts.
    Explore(RunArgs),
}

#[derive(Args)]
struct Common {
    /// Suite identifier.
    #[arg(long)]
    suite: Option<String>,
    /// Parameter JSON: {"upper": [[alpha, A], …], "lower": [[beta, B], …]}.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Grid JSON: {"alpha1": [lo, hi], …, "z": [lo, hi], "samples": n, "mode": "random"|"lattice", "seed": n}.
    #[arg(long)]
    grid: Option<PathBuf>,
    /// Evaluation point; for suites, fixes the z range to this value.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<f64>,
    /// Number of instances (overrides the grid file).
    #[arg(long)]
    samples: Option<usize>,
    /// PRNG seed (overrides the grid file).
    #[arg(long)]
    seed: Option<u64>,
    /// Report file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, default_value_t = Tolerance::default().abs)]
    tol_abs: f64,
    #[arg(long, default_value_t = Tolerance::default().rel)]
    tol_rel: f64,
    /// Re-check 10 evenly spaced instances with the big-float oracle at this many digits.
    #[arg(long)]
    digits: Option<u32>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value = "plain")]
    variant: EvalVariant,
    /// Evaluate the section Σ_{k ≥ n+1} instead of the full series.
    #[arg(long)]
    tail: Option<i64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Section index for problem1-kn with --params.
    #[arg(long, default_value_t = 0)]
    n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalVariant {
    Plain,
    Normalized,
    Tilde,
    Derivative,
    Dbeta1,
}

/// A failure that ends the run with exit code 2 or 3.
enum Abort {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Abort {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Abort::Numerical(e.to_string())
        } else {
            Abort::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for Abort {
    fn from(e: std::io::Error) -> Self {
        Abort::Usage(format!("i/o error: {e}"))
    }
}

type Run<T> = std::result::Result<T, Abort>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(a) => run_eval(&a),
        Command::Check(a) => run_check(&a, false),
        Command::Sweep(a) => run_check(&a, true),
        Command::Explore(a) => run_explore(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Abort::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Abort::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(3)
        }
    }
}

fn read(path: &Path) -> Run<String> {
    std::fs::read_to_string(path).map_err(|e| Abort::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_params(c: &Common) -> Run<Params> {
    let path = c.params.as_deref().ok_or_else(|| Abort::Usage("--params is required".into()))?;
    Ok(Params::from_json(&read(path)?)?)
}

fn run_eval(a: &EvalArgs) -> Run<u8> {
    let c = &a.common;
    let params = load_params(c)?;
    let z = c.z.ok_or_else(|| Abort::Usage("--z is required".into()))?;
    if a.tail.is_some() && a.variant != EvalVariant::Plain {
        return Err(Abort::Usage("--tail applies to the plain variant only".into()));
    }
    let cfg = Config::default();
    let r: Evaluation = match (a.variant, a.tail) {
        (EvalVariant::Plain, Some(n)) => series::eval_tail(&params, TailSpec::new(n)?, z, &cfg)?,
        (EvalVariant::Plain, None) => series::eval(&params, z, &cfg)?,
        (EvalVariant::Normalized, _) => series::eval_normalized(&params, z, &cfg)?,
        (EvalVariant::Tilde, _) => series::eval_tilde(&params, z, &cfg)?,
        (EvalVariant::Derivative, _) => series::derivative(&params, z, &cfg)?,
        (EvalVariant::Dbeta1, _) => series::dbeta1(&params, z, &cfg)?,
    };
    let mut w = sink(c.out.as_deref())?;
    match c.format {
        Format::Csv => {
            writeln!(w, "value,terms_used,tail_bound")?;
            writeln!(w, "{},{},{}", num(r.value), r.terms_used, num(r.tail_bound))?;
        }
        Format::Json => {
            let doc = serde_json::json!({
                "value": r.value,
                "terms_used": r.terms_used,
                "tail_bound": r.tail_bound,
            });
            writeln!(w, "{doc}")?;
        }
    }
    w.flush()?;
    if c.out.is_some() {
        eprintln!("value = {}  terms_used = {}  tail_bound = {}", num(r.value), r.terms_used, num(r.tail_bound));
    }
    Ok(0)
}

fn grid_spec(c: &Common) -> Run<GridSpec> {
    let mut g = match &c.grid {
        Some(p) => GridSpec::from_json(&read(p)?)?,
        None => GridSpec::new(1000, 0),
    };
    if let Some(n) = c.samples {
        g.samples = n;
    }
    if let Some(s) = c.seed {
        g.seed = s;
    }
    if let Some(z) = c.z {
        g.ranges.insert("z".into(), (z, z));
    }
    g.validate()?;
    Ok(g)
}

fn checker(c: &Common) -> Run<Checker<FastEvaluator>> {
    if !(c.tol_abs >= 0.0 && c.tol_rel >= 0.0) {
        return Err(Abort::Usage("tolerances must be non-negative".into()));
    }
    Ok(Checker::new(FastEvaluator::default(), Tolerance::new(c.tol_abs, c.tol_rel)))
}

fn suite_id(c: &Common) -> Run<&str> {
    c.suite.as_deref().ok_or_else(|| Abort::Usage("--suite is required".into()))
}

fn run_check(a: &RunArgs, sweep: bool) -> Run<u8> {
    let c = &a.common;
    let id = suite_id(c)?;
    let s = suite(id)?;
    if s.explore {
        return Err(Abort::Usage(format!("{id} is an exploration probe; use explore")));
    }
    if c.params.is_some() {
        return Err(Abort::Usage("--params applies to eval and explore; check draws parameters from --grid".into()));
    }
    let grid = grid_spec(c)?;
    let chk = checker(c)?;
    let drawn = sample(s, &grid)?;
    let rows = run_instances(&drawn.instances, &chk)?;
    let mut w = sink(c.out.as_deref())?;
    write_reports(&mut *w, c.format, grid.seed, id, &rows)?;
    drop(w);

    let sum = Summary::of(&rows, &chk.tol);
    let worst = sum.worst.map(|i| &rows[i]);
    eprintln!(
        "{id}: {}/{} pass, {} fail, {} numerical failures ({} candidates rejected){}",
        sum.passed,
        sum.total,
        sum.failed,
        sum.numerical_failures,
        drawn.rejected,
        worst.map_or(String::new(), |r| format!(
            "; worst margin {} at z={} (lhs={}, rhs={})",
            num(r.margin),
            r.z.render(),
            num(r.lhs),
            num(r.rhs)
        ))
    );
    if id == "kn-bound" {
        let limits: Vec<f64> = rows.iter().filter(|r| r.params_echo["variant"] == "bound").map(|r| r.rhs).collect();
        if !limits.is_empty() {
            let lo = limits.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = limits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            eprintln!("{id}: z -> 0 limit of K_n ranges over [{}, {}]", num(lo), num(hi));
        }
    }
    let mut oracle_fail = false;
    if let Some(d) = c.digits {
        oracle_fail = spot_check(&drawn.instances, &chk, d)?;
    }
    if sweep {
        return Ok(0);
    }
    Ok(if sum.failed > 0 || oracle_fail {
        1
    } else if sum.numerical_failures > 0 {
        3
    } else {
        0
    })
}

/// Re-runs 10 evenly spaced instances with the oracle; true if it finds a violation.
fn spot_check(instances: &[Instance], fast: &Checker<FastEvaluator>, digits: u32) -> Run<bool> {
    let hp = Checker::new(HpEvaluator { digits }, fast.tol);
    let picks: Vec<Instance> = (0..10.min(instances.len())).map(|i| instances[i * instances.len() / 10].clone()).collect();
    let f = run_instances(&picks, fast)?;
    let h = run_instances(&picks, &hp)?;
    let agree = f.iter().zip(&h).filter(|(x, y)| x.verdict == y.verdict).count();
    let dmax = f
        .iter()
        .zip(&h)
        .map(|(x, y)| (x.margin - y.margin).abs() / y.lhs.abs().max(y.rhs.abs()).max(f64::MIN_POSITIVE))
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max);
    eprintln!(
        "oracle spot-check ({digits} digits): {agree}/{} rows agree, max relative margin difference {}",
        h.len(),
        num(dmax)
    );
    Ok(h.iter().any(|r: &InequalityReport| r.verdict == Verdict::Fail))
}

fn run_explore(a: &RunArgs) -> Run<u8> {
    let c = &a.common;
    let id = suite_id(c)?;
    let s = suite(id)?;
    if !s.explore {
        return Err(Abort::Usage(format!("{id} is a check suite; use check or sweep")));
    }
    let grid = grid_spec(c)?;
    let chk = checker(c)?;
    let instances = match &c.params {
        Some(_) => {
            let params = load_params(c)?;
            let zmax = grid.ranges.get("z").map_or(20.0, |r| r.1);
            if zmax.is_nan() || zmax <= 0.0 {
                return Err(Abort::Usage(format!("z grid upper end must be positive, got {zmax}")));
            }
            let z_grid = (1..=GRID_POINTS).map(|i| zmax * i as f64 / GRID_POINTS as f64).collect();
            vec![match id {
                "problem1-kn" => Instance::ExploreKn { params, n: a.n, grid: z_grid },
                _ => Instance::ExploreXi { params, grid: z_grid, variant: "generic".into() },
            }]
        }
        None => sample(s, &grid)?.instances,
    };
    let rows = explore_instances(&instances, &chk)?;
    let mut w = sink(c.out.as_deref())?;
    write_explorations(&mut *w, c.format, grid.seed, id, &rows)?;
    drop(w);
    let mut tally = std::collections::BTreeMap::<&str, usize>::new();
    for r in &rows {
        *tally.entry(r.verdict.as_str()).or_default() += 1;
    }
    let tally: Vec<String> = tally.iter().map(|(v, n)| format!("{v} {n}")).collect();
    eprintln!("{id}: {} instances: {}", rows.len(), tally.join(", "));
    Ok(0)
}
