use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Acceptance tolerance: pass iff margin ≥ −(abs + rel·max(|lhs|, |rhs|)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-12, rel: 1e-10 }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    pub fn slack(&self, lhs: f64, rhs: f64) -> f64 {
        self.abs + self.rel * lhs.abs().max(rhs.abs())
    }

    pub fn verdict(&self, lhs: f64, rhs: f64, margin: f64) -> Verdict {
        if !margin.is_finite() {
            Verdict::NumericalFailure
        } else if margin >= -self.slack(lhs, rhs) {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NumericalFailure,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "true",
            Verdict::Fail => "false",
            Verdict::NumericalFailure => "numerical-failure",
        }
    }
}

/// Where an instance was evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ZSpec {
    Point(f64),
    Pair(f64, f64),
    Grid { lo: f64, hi: f64, n: usize },
}

impl ZSpec {
    pub fn grid(points: &[f64]) -> Self {
        let lo = points.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = points.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ZSpec::Grid { lo, hi, n: points.len() }
    }

    pub fn render(&self) -> String {
        match self {
            ZSpec::Point(z) => short(*z),
            ZSpec::Pair(a, b) => format!("{};{}", short(*a), short(*b)),
            ZSpec::Grid { lo, hi, n } => format!("grid[{}..{};{n}]", short(*lo), short(*hi)),
        }
    }
}

/// Round-trip decimal, switching to exponent form outside [1e-4, 1e15).
fn short(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// One checked inequality instance; margin ≥ 0 means the inequality holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub suite_id: String,
    pub params_echo: Value,
    pub z: ZSpec,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub err_estimate: f64,
}

impl InequalityReport {
    /// Builds a report with margin = lhs − rhs.
    pub fn new(
        suite_id: &str,
        params_echo: Value,
        z: ZSpec,
        lhs: f64,
        rhs: f64,
        err_estimate: f64,
        tol: &Tolerance,
    ) -> Self {
        Self::with_margin(suite_id, params_echo, z, lhs, rhs, lhs - rhs, err_estimate, tol)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_margin(
        suite_id: &str,
        params_echo: Value,
        z: ZSpec,
        lhs: f64,
        rhs: f64,
        margin: f64,
        err_estimate: f64,
        tol: &Tolerance,
    ) -> Self {
        InequalityReport {
            suite_id: suite_id.to_string(),
            params_echo,
            z,
            lhs,
            rhs,
            margin,
            verdict: tol.verdict(lhs, rhs, margin),
            err_estimate,
        }
    }

    /// A row recording that the instance could not be certified numerically.
    pub fn numerical_failure(suite_id: &str, params_echo: Value, z: ZSpec, reason: &str) -> Self {
        let mut echo = params_echo;
        if let Value::Object(map) = &mut echo {
            map.insert("failure".into(), Value::String(reason.to_string()));
        }
        InequalityReport {
            suite_id: suite_id.to_string(),
            params_echo: echo,
            z,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            verdict: Verdict::NumericalFailure,
            err_estimate: f64::NAN,
        }
    }

    pub fn pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_margin_passes() {
        let t = Tolerance::default();
        let r = InequalityReport::new("x", Value::Null, ZSpec::Point(0.0), 1.0, 1.0, 0.0, &t);
        assert!(r.pass());
        let r = InequalityReport::new("x", Value::Null, ZSpec::Point(0.0), 1.0, 1.0 + 1e-6, 0.0, &t);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn z_rendering() {
        assert_eq!(ZSpec::Point(1.5).render(), "1.5");
        assert_eq!(ZSpec::Pair(0.5, 2.0).render(), "0.5;2");
        assert_eq!(ZSpec::grid(&[1.0, 3.0, 2.0]).render(), "grid[1..3;3]");
        assert_eq!(ZSpec::Point(1e-300).render(), "1e-300");
    }
}
