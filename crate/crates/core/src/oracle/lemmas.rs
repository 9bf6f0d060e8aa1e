//! Sequence- and series-ratio monotonicity probes plus a central difference.

use crate::error::{Error, Result};

/// Observed direction of a sequence, with a relative tolerance for ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Constant,
    Increasing,
    Decreasing,
    Neither,
}

const TIE: f64 = 1e-12;

pub fn classify(xs: &[f64]) -> Monotonicity {
    let (mut up, mut down) = (false, false);
    for w in xs.windows(2) {
        let d = w[1] - w[0];
        if d.abs() <= TIE * w[0].abs().max(w[1].abs()) {
            continue;
        }
        if d > 0.0 {
            up = true;
        } else {
            down = true;
        }
    }
    match (up, down) {
        (false, false) => Monotonicity::Constant,
        (true, false) => Monotonicity::Increasing,
        (false, true) => Monotonicity::Decreasing,
        (true, true) => Monotonicity::Neither,
    }
}

/// Directions of a_n/b_n and of the prefix ratio Σa/Σb.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioMonotonicity {
    pub termwise: Monotonicity,
    pub cumulative: Monotonicity,
}

impl RatioMonotonicity {
    /// Monotone termwise ratios force the same direction on the prefix ratios.
    pub fn consistent(&self) -> bool {
        match self.termwise {
            Monotonicity::Neither => true,
            d => self.cumulative == d,
        }
    }
}

pub fn seq_ratio_monotone(a: &[f64], b: &[f64]) -> Result<RatioMonotonicity> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::Length(format!(
            "sequences need equal lengths >= 2, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if b.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Parameter("denominator sequence must be positive".into()));
    }
    let termwise: Vec<f64> = a.iter().zip(b).map(|(x, y)| x / y).collect();
    let (mut sa, mut sb) = (0.0, 0.0);
    let cumulative: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            sa += x;
            sb += y;
            sa / sb
        })
        .collect();
    Ok(RatioMonotonicity { termwise: classify(&termwise), cumulative: classify(&cumulative) })
}

/// Evaluates Σa_n x^n / Σb_n x^n on the grid and reports whether it moves in
/// the direction of a_n/b_n (constant when the coefficient ratio is constant).
pub fn series_ratio_monotone_check(coef_a: &[f64], coef_b: &[f64], x_grid: &[f64]) -> Result<bool> {
    let coef_dir = seq_ratio_monotone(coef_a, coef_b)?.termwise;
    if x_grid.windows(2).any(|w| !(w[1] > w[0])) || x_grid.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::Grid("x grid must be non-negative and strictly increasing".into()));
    }
    let eval = |c: &[f64], x: f64| -> Result<f64> {
        let mut sum = 0.0;
        let mut last = 0.0;
        let mut p = 1.0;
        for &ck in c {
            last = ck * p;
            sum += last;
            p *= x;
        }
        if last.abs() > 1e-15 * sum.abs() {
            return Err(Error::Convergence(format!("truncated series tail too large at x = {x}")));
        }
        Ok(sum)
    };
    let ratios = x_grid
        .iter()
        .map(|&x| Ok(eval(coef_a, x)? / eval(coef_b, x)?))
        .collect::<Result<Vec<f64>>>()?;
    let observed = classify(&ratios);
    Ok(match coef_dir {
        Monotonicity::Neither => false,
        Monotonicity::Constant => observed == Monotonicity::Constant,
        d => observed == d || observed == Monotonicity::Constant && ratios.len() < 2,
    })
}

/// (f(z+h) − f(z−h)) / 2h.
pub fn finite_difference(f: impl Fn(f64) -> Result<f64>, z: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Parameter(format!("step h = {h} must be positive")));
    }
    Ok((f(z + h)? - f(z - h)?) / (2.0 * h))
}
