use std::ops::{Add, Div, Mul, Sub};

use crate::error::Result;
use crate::functions;
use crate::gammakit::log_gamma;
use crate::oracle::{hp_eval_section, hp_hypergeometric};
use crate::series::{self, TailSpec};
use crate::{Config, Params};

const U: f64 = f64::EPSILON;

/// A value with an absolute error bound, propagated to first order plus one
/// rounding per operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approx {
    pub value: f64,
    pub err: f64,
}

impl Add for Approx {
    type Output = Approx;

    fn add(self, o: Approx) -> Approx {
        let v = self.value + o.value;
        Approx::new(v, self.err + o.err + U * v.abs())
    }
}

impl Sub for Approx {
    type Output = Approx;

    fn sub(self, o: Approx) -> Approx {
        let v = self.value - o.value;
        Approx::new(v, self.err + o.err + U * v.abs())
    }
}

impl Mul for Approx {
    type Output = Approx;

    fn mul(self, o: Approx) -> Approx {
        let v = self.value * o.value;
        Approx::new(v, self.value.abs() * o.err + o.value.abs() * self.err + self.err * o.err + U * v.abs())
    }
}

impl Div for Approx {
    type Output = Approx;

    fn div(self, o: Approx) -> Approx {
        let v = self.value / o.value;
        let d = o.value.abs();
        let rel = self.err / self.value.abs().max(f64::MIN_POSITIVE) + o.err / d;
        Approx::new(v, v.abs() * rel / (1.0 - (o.err / d).min(0.5)) + U * v.abs())
    }
}

impl Approx {
    pub fn new(value: f64, err: f64) -> Self {
        Approx { value, err: err.abs() }
    }

    pub fn exact(value: f64) -> Self {
        Approx { value, err: 0.0 }
    }





    pub fn scale(self, c: f64) -> Approx {
        let v = self.value * c;
        Approx::new(v, self.err * c.abs() + U * v.abs())
    }

    /// x^p for x > 0.
    pub fn powf(self, p: f64) -> Approx {
        let v = self.value.powf(p);
        let rel = p.abs() * self.err / self.value.abs();
        Approx::new(v, v.abs() * (rel.exp_m1() + 2.0 * U * (1.0 + (p * self.value.ln()).abs())))
    }

    /// ln x for x > 0, with the bound on the log.
    pub fn ln(self) -> Approx {
        let v = self.value.ln();
        Approx::new(v, self.err / self.value.abs() + U * v.abs().max(1.0))
    }

    pub fn sqrt(self) -> Approx {
        let v = self.value.sqrt();
        Approx::new(v, self.err / (2.0 * v.max(f64::MIN_POSITIVE)) + U * v)
    }
}

/// A series value together with its cancellation indicator Σ|t|/|Σt|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluated {
    pub approx: Approx,
    pub condition: f64,
}

/// Series backend used by the checkers.
pub trait Evaluator: Sync {
    /// Σ_{k ≥ start} of the Fox–Wright terms.
    fn section(&self, params: &Params, z: f64, start: usize) -> Result<Evaluated>;

    /// Σ_k ∏(a)_k/∏(b)_k z^k/k! for real upper and positive lower parameters.
    fn hyp(&self, upper: &[f64], lower: &[f64], z: f64) -> Result<Evaluated>;

    fn eval(&self, params: &Params, z: f64) -> Result<Approx> {
        Ok(self.section(params, z, 0)?.approx)
    }

    /// Γ(β₁)·ₚΨ_q.
    fn tilde(&self, params: &Params, z: f64) -> Result<Approx> {
        let lg = log_gamma(params.lower.first().map_or(1.0, |b| b.0))?;
        Ok(self.eval(params, z)?.mul(gamma_factor(lg)))
    }

    /// d/dz via the parameter shift (α+A, β+B).
    fn derivative(&self, params: &Params, z: f64) -> Result<Approx> {
        self.eval(&params.shifted(), z)
    }
}

/// e^{lg} with the error from rounding lg.
pub fn gamma_factor(lg: f64) -> Approx {
    let v = lg.exp();
    Approx::new(v, v * 4.0 * U * (1.0 + lg.abs()))
}

/// The double-precision engine.
#[derive(Debug, Clone, Default)]
pub struct FastEvaluator {
    pub cfg: Config,
}

impl Evaluator for FastEvaluator {
    fn section(&self, params: &Params, z: f64, start: usize) -> Result<Evaluated> {
        let tail = TailSpec::new(start as i64 - 1)?;
        let r = series::eval_tail(params, tail, z, &self.cfg)?;
        Ok(Evaluated { approx: Approx::new(r.value, r.error_bound()), condition: r.condition_estimate })
    }

    fn hyp(&self, upper: &[f64], lower: &[f64], z: f64) -> Result<Evaluated> {
        let r = functions::hypergeometric_series(upper, lower, z, &self.cfg)?;
        Ok(Evaluated { approx: Approx::new(r.value, r.error_bound()), condition: r.condition_estimate })
    }
}

/// The big-float oracle, rounded to f64 on output.
#[derive(Debug, Clone)]
pub struct HpEvaluator {
    pub digits: u32,
}

impl Default for HpEvaluator {
    fn default() -> Self {
        HpEvaluator { digits: 30 }
    }
}

fn from_hp(s: crate::oracle::HpSum) -> Evaluated {
    let v = s.value.to_f64();
    Evaluated { approx: Approx::new(v, s.tail_bound.to_f64() + 0.5 * U * v.abs()), condition: 1.0 }
}

impl Evaluator for HpEvaluator {
    fn section(&self, params: &Params, z: f64, start: usize) -> Result<Evaluated> {
        Ok(from_hp(hp_eval_section(params, z, start, self.digits)?))
    }

    fn hyp(&self, upper: &[f64], lower: &[f64], z: f64) -> Result<Evaluated> {
        Ok(from_hp(hp_hypergeometric(upper, lower, z, self.digits)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn propagation() {
        let a = Approx::new(2.0, 1e-10);
        let b = Approx::new(4.0, 2e-10);
        assert!((a.mul(b).err - 8e-10).abs() < 1e-12);
        assert!((b.div(a).err - 2e-10).abs() < 1e-12);
        assert!(a.sub(a).err >= 2e-10);
        assert!((a.powf(3.0).err - 3.0 * 4.0 * 1e-10).abs() < 1e-12);
    }

    #[test]
    fn fast_and_oracle_agree() {
        let p = Params::new(vec![(1.0, 1.0)], vec![(1.0, 1.0), (1.0, 1.0)]).unwrap();
        let f = FastEvaluator::default().section(&p, 1.0, 1).unwrap();
        let h = HpEvaluator::default().section(&p, 1.0, 1).unwrap();
        assert!((f.approx.value - h.approx.value).abs() <= f.approx.err + h.approx.err);
        let t = FastEvaluator::default().tilde(&p, 1.0).unwrap();
        assert!((t.value - 2.279_585_302_336_067_3).abs() < 1e-14);
    }
}
