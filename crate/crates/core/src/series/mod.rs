//! Fox–Wright series engine: plain, normalized, tilde, tail-section,
//! parameter-shift derivative and ∂/∂β₁ evaluations.

mod engine;
mod sum;

pub use engine::{
    dbeta1, derivative, epsilon, eval, eval_normalized, eval_tail, eval_tilde, head_partial_sum,
};
pub(crate) use engine::{engine_sum, sum_series, LogTerm, SeriesJob};
pub use sum::NeumaierSum;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Parameters (α, A; β, B) of ₚΨ_q.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoxWrightParams<T> {
    pub upper: Vec<(T, T)>,
    pub lower: Vec<(T, T)>,
}

impl<T: Scalar> FoxWrightParams<T> {
    pub fn new(upper: Vec<(T, T)>, lower: Vec<(T, T)>) -> Result<Self> {
        let p = FoxWrightParams { upper, lower };
        p.validate()?;
        Ok(p)
    }

    /// Every α, β > 0 and every A, B ≥ 0, all finite.
    pub fn validate(&self) -> Result<()> {
        for (i, &(a, w)) in self.upper.iter().enumerate() {
            if !(a > T::zero()) || !a.is_finite() {
                return Err(Error::Parameter(format!("alpha_{} = {a} must be positive", i + 1)));
            }
            if !(w >= T::zero()) || !w.is_finite() {
                return Err(Error::Parameter(format!("A_{} = {w} must be non-negative", i + 1)));
            }
        }
        for (j, &(b, w)) in self.lower.iter().enumerate() {
            if !(b > T::zero()) || !b.is_finite() {
                return Err(Error::Parameter(format!("beta_{} = {b} must be positive", j + 1)));
            }
            if !(w >= T::zero()) || !w.is_finite() {
                return Err(Error::Parameter(format!("B_{} = {w} must be non-negative", j + 1)));
            }
        }
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    /// ε = 1 + ΣB − ΣA.
    pub fn epsilon(&self) -> T {
        epsilon(self)
    }

    /// Copy with the first upper parameter α₁ replaced.
    pub fn with_alpha1(&self, alpha1: T) -> Self {
        let mut p = self.clone();
        p.upper[0].0 = alpha1;
        p
    }

    /// Copy with the first lower parameter β₁ replaced.
    pub fn with_beta1(&self, beta1: T) -> Self {
        let mut p = self.clone();
        p.lower[0].0 = beta1;
        p
    }

    /// (α + A, A; β + B, B): the parameters of the z-derivative.
    pub fn shifted(&self) -> Self {
        FoxWrightParams {
            upper: self.upper.iter().map(|&(a, w)| (a + w, w)).collect(),
            lower: self.lower.iter().map(|&(b, w)| (b + w, w)).collect(),
        }
    }

    pub fn cast<U: Scalar>(&self) -> FoxWrightParams<U> {
        let cv = |v: &Vec<(T, T)>| {
            v.iter()
                .map(|&(a, w)| (U::c(a.to_f64_lossy()), U::c(w.to_f64_lossy())))
                .collect()
        };
        FoxWrightParams { upper: cv(&self.upper), lower: cv(&self.lower) }
    }
}

impl FoxWrightParams<f64> {
    /// Parses `{"upper": [[alpha, A], …], "lower": [[beta, B], …]}`.
    pub fn from_json(s: &str) -> Result<Self> {
        let p: FoxWrightParams<f64> = serde_json::from_str(s)
            .map_err(|e| Error::Parameter(format!("malformed parameter JSON: {e}")))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("params serialize")
    }
}

/// Summation controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig<T> {
    pub rel_tol: T,
    pub max_terms: usize,
    pub log_mode: bool,
}

impl<T: Scalar> Default for EvalConfig<T> {
    fn default() -> Self {
        EvalConfig { rel_tol: T::c(1e-15).max(T::epsilon()), max_terms: 10_000, log_mode: false }
    }
}

impl<T: Scalar> EvalConfig<T> {
    pub fn new(rel_tol: T, max_terms: usize, log_mode: bool) -> Result<Self> {
        let c = EvalConfig { rel_tol, max_terms, log_mode };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero() && self.rel_tol < T::one()) {
            return Err(Error::Parameter(format!("rel_tol {} not in (0, 1)", self.rel_tol)));
        }
        if self.max_terms < 8 {
            return Err(Error::Parameter(format!("max_terms {} < 8", self.max_terms)));
        }
        Ok(())
    }

    pub fn with_log_mode(mut self, on: bool) -> Self {
        self.log_mode = on;
        self
    }
}

/// Value of one series evaluation with its error indicators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult<T> {
    /// Σ terms; ±inf is possible only in log mode.
    pub value: T,
    pub log_magnitude: T,
    /// −1, 0 or +1.
    pub sign: i8,
    pub terms_used: usize,
    /// Geometric bound on the truncated remainder.
    pub tail_bound: T,
    /// Σ|term| / |Σ term|.
    pub condition_estimate: T,
    /// Bound on accumulated rounding in the computed terms and their sum.
    pub rounding_estimate: T,
}

impl<T: Scalar> EvalResult<T> {
    /// tail_bound + rounding_estimate.
    pub fn error_bound(&self) -> T {
        self.tail_bound + self.rounding_estimate
    }

    /// Multiplies by a positive factor given by its logarithm.
    pub(crate) fn scaled_by_log(mut self, log_factor: T, log_mode: bool) -> Result<Self> {
        self.log_magnitude = self.log_magnitude + log_factor;
        let f = log_factor.exp();
        self.value = if self.sign == 0 {
            T::zero()
        } else {
            T::c(self.sign as f64) * self.log_magnitude.exp()
        };
        if !log_mode && !self.value.is_finite() {
            return Err(Error::Overflow(self.log_magnitude.to_f64_lossy()));
        }
        self.tail_bound = self.tail_bound * f;
        self.rounding_estimate = self.rounding_estimate * f
            + T::epsilon() * T::c(4.0) * self.value.abs() * (T::one() + log_factor.abs());
        Ok(self)
    }
}

/// Section index n of ₚΨ_qⁿ = Σ_{k ≥ n+1}; n = −1 is the full series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailSpec {
    n: i64,
}

impl TailSpec {
    pub fn new(n: i64) -> Result<Self> {
        if n < -1 {
            return Err(Error::Parameter(format!("tail index {n} < -1")));
        }
        Ok(TailSpec { n })
    }

    pub fn full() -> Self {
        TailSpec { n: -1 }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// First summed index, n + 1.
    pub fn start(&self) -> usize {
        (self.n + 1) as usize
    }
}
