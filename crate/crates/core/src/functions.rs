//! Named members of the family as reductions over the series engine.

use crate::dd::{self, Dd};
use crate::error::{Error, Result};
use crate::gammakit::log_gamma_unchecked;
use crate::inequalities::{InequalityReport, Verdict, ZSpec};
use crate::scalar::Scalar;
use crate::series::{self, EvalConfig, EvalResult, FoxWrightParams, SeriesJob};

/// Upper and lower parameters of ₚF_q, all positive.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricParams<T> {
    pub upper: Vec<T>,
    pub lower: Vec<T>,
}

impl<T: Scalar> HypergeometricParams<T> {
    pub fn new(upper: Vec<T>, lower: Vec<T>) -> Result<Self> {
        for &x in upper.iter().chain(lower.iter()) {
            if !(x > T::zero()) || !x.is_finite() {
                return Err(Error::Parameter(format!("hypergeometric parameter {x} must be positive")));
            }
        }
        Ok(HypergeometricParams { upper, lower })
    }

    /// The Fox–Wright parameters with every weight equal to 1.
    pub fn as_fox_wright(&self) -> FoxWrightParams<T> {
        FoxWrightParams {
            upper: self.upper.iter().map(|&a| (a, T::one())).collect(),
            lower: self.lower.iter().map(|&b| (b, T::one())).collect(),
        }
    }
}

/// Pairs (B_j, β_j) of the 2n-parameter Mittag-Leffler function.
#[derive(Debug, Clone, PartialEq)]
pub struct MittagLefflerParams<T> {
    pub pairs: Vec<(T, T)>,
}

impl<T: Scalar> MittagLefflerParams<T> {
    pub fn new(pairs: Vec<(T, T)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Parameter("Mittag-Leffler needs n >= 1".into()));
        }
        for &(w, b) in &pairs {
            if !(w >= T::zero()) || !w.is_finite() {
                return Err(Error::Parameter(format!("Mittag-Leffler weight {w} must be non-negative")));
            }
            if !(b > T::zero()) || !b.is_finite() {
                return Err(Error::Parameter(format!("Mittag-Leffler beta {b} must be positive")));
            }
        }
        if pairs.iter().all(|&(w, _)| w == T::zero()) {
            return Err(Error::Parameter("Mittag-Leffler weights are all zero".into()));
        }
        Ok(MittagLefflerParams { pairs })
    }

    /// ₁Ψ_n[(1,1); (β_j, B_j)].
    pub fn as_fox_wright(&self) -> FoxWrightParams<T> {
        FoxWrightParams {
            upper: vec![(T::one(), T::one())],
            lower: self.pairs.iter().map(|&(w, b)| (b, w)).collect(),
        }
    }
}

fn gate<T: Scalar>(p: usize, q: usize, z: T) -> Result<Option<T>> {
    if p > q + 1 {
        return Err(Error::Divergence(format!("{p}F{q} diverges for every z != 0")));
    }
    if p == q + 1 {
        if !(z.abs() < T::one()) {
            return Err(Error::Divergence(format!("{p}F{q} needs |z| < 1, got {z}")));
        }
        return Ok(Some(z.abs()));
    }
    Ok(None)
}

/// ₚF_q(z) = [∏Γ(β)/∏Γ(α)] ₚΨ_q[(α,1); (β,1)](z).
pub fn pfq<T: Scalar>(hp: &HypergeometricParams<T>, z: T, cfg: &EvalConfig<T>) -> Result<EvalResult<T>> {
    cfg.validate()?;
    let hp = HypergeometricParams::new(hp.upper.clone(), hp.lower.clone())?;
    let floor = gate(hp.upper.len(), hp.lower.len(), z)?;
    let fw = hp.as_fox_wright();
    let offset = hp.lower.iter().fold(T::zero(), |s, &b| s + log_gamma_unchecked(b))
        - hp.upper.iter().fold(T::zero(), |s, &a| s + log_gamma_unchecked(a));
    series::engine_sum(&fw, z, cfg, offset, floor)
}

/// Σ ∏(a)_k/∏(b)_k z^k/k! by the rising-factorial recurrence; upper
/// parameters may be any real, lower parameters must be positive.
pub fn hypergeometric_series<T: Scalar>(
    upper: &[T],
    lower: &[T],
    z: T,
    cfg: &EvalConfig<T>,
) -> Result<EvalResult<T>> {
    cfg.validate()?;
    for &b in lower {
        if !(b > T::zero()) || !b.is_finite() {
            return Err(Error::Parameter(format!("lower parameter {b} must be positive")));
        }
    }
    if upper.iter().any(|a| !a.is_finite()) || !z.is_finite() {
        return Err(Error::Parameter("non-finite hypergeometric argument".into()));
    }
    let floor = gate(upper.len(), lower.len(), z)?;
    let job = SeriesJob { start: 0, cfg: *cfg, ratio_floor: floor };
    let ln_abs_z = if z == T::zero() { Dd::from(T::zero()) } else { dd::ln(Dd::from(z.abs())) };
    let step_mag = T::c(1e-6);
    let mut log_abs = Dd::from(T::zero());
    let mut sign: i8 = 1;
    let mut finished = false;
    series::sum_series(&job, move |k| {
        if finished {
            return None;
        }
        if k > 0 {
            let j = T::from_usize_lossy(k - 1);
            let mut l = ln_abs_z.sub(dd::ln(Dd::from(j + T::one())));
            let mut s = if z < T::zero() { -1 } else { 1 };
            for &a in upper {
                let f = dd::two_sum(a, j);
                if f.hi == T::zero() {
                    finished = true;
                    return None;
                }
                let f = if f.hi < T::zero() {
                    s = -s;
                    f.neg()
                } else {
                    f
                };
                l = l.add(dd::ln(f));
            }
            for &b in lower {
                l = l.sub(dd::ln(dd::two_sum(b, j)));
            }
            log_abs = log_abs.add(l);
            sign *= s;
            if z == T::zero() {
                finished = true;
                return None;
            }
        }
        Some(series::LogTerm {
            log_abs: log_abs.hi,
            log_lo: log_abs.lo,
            sign,
            mag: step_mag * T::from_usize_lossy(k),
        })
    })
}

/// E_{(B,β)_n}(z) = ₁Ψ_n[(1,1); (β_j, B_j)](z).
pub fn mittag_leffler<T: Scalar>(
    mp: &MittagLefflerParams<T>,
    z: T,
    cfg: &EvalConfig<T>,
) -> Result<EvalResult<T>> {
    let mp = MittagLefflerParams::new(mp.pairs.clone())?;
    series::eval(&mp.as_fox_wright(), z, cfg)
}

/// W_{B₁,β₁}(z) = Σ z^k/(k! Γ(β₁+kB₁)); normalized multiplies by Γ(β₁).
pub fn wright<T: Scalar>(b1: T, beta1: T, z: T, normalized: bool, cfg: &EvalConfig<T>) -> Result<EvalResult<T>> {
    let p = FoxWrightParams::new(vec![], vec![(beta1, b1)])?;
    if normalized {
        series::eval_tilde(&p, z, cfg)
    } else {
        series::eval(&p, z, cfg)
    }
}

/// 𝓘_ν(z) = Γ(ν+1) Σ (z²/4)^k / (k! Γ(ν+1+k)).
pub fn bessel_norm<T: Scalar>(nu: T, z: T, cfg: &EvalConfig<T>) -> Result<EvalResult<T>> {
    if !(nu > -T::one()) || !nu.is_finite() {
        return Err(Error::Domain(format!("bessel_norm needs nu > -1, got {nu}")));
    }
    wright(T::one(), nu + T::one(), z * z / T::c(4.0), true, cfg)
}

/// f₁ = c(1+a−b)/(a−c) of the Kummer-type ₂F₂ transform.
pub fn kummer_f1<T: Scalar>(a: T, b: T, c: T) -> Result<T> {
    if a == c {
        return Err(Error::SingularTransform(format!("a = c = {a}")));
    }
    Ok(c * (T::one() + a - b) / (a - c))
}

/// (₂F₂(a, c+1; b, c; z), e^z ₂F₂(b−a−1, f₁+1; b, f₁; −z)).
pub fn kummer_2f2_pair<T: Scalar>(a: T, b: T, c: T, z: T, cfg: &EvalConfig<T>) -> Result<(EvalResult<T>, EvalResult<T>)> {
    let f1 = kummer_f1(a, b, c)?;
    if !(b > T::zero()) || !(c > T::zero()) {
        return Err(Error::Parameter(format!("kummer pair needs b, c > 0, got b = {b}, c = {c}")));
    }
    if !(f1 > T::zero()) {
        return Err(Error::Parameter(format!("kummer pair needs f1 > 0, got {f1}")));
    }
    let left = hypergeometric_series(&[a, c + T::one()], &[b, c], z, cfg)?;
    let right = hypergeometric_series(&[b - a - T::one(), f1 + T::one()], &[b, f1], -z, cfg)?;
    let right = right.scaled_by_log(z, cfg.log_mode)?;
    Ok((left, right))
}

/// Compares d/dz E_{B,β} (parameter shift) with (E_{B,β−1} − (β−1)E_{B,β})/(Bz).
pub fn ml_derivative_identity_check(b: f64, beta: f64, z: f64, cfg: &EvalConfig<f64>) -> Result<InequalityReport> {
    if !(beta > 1.0) {
        return Err(Error::Domain(format!("beta = {beta} must exceed 1")));
    }
    if z == 0.0 || !z.is_finite() {
        return Err(Error::Domain("z must be nonzero".into()));
    }
    if !(b > 0.0) {
        return Err(Error::Domain(format!("B = {b} must be positive")));
    }
    let ml = |bt: f64| MittagLefflerParams::new(vec![(b, bt)]);
    let lhs = series::derivative(&ml(beta)?.as_fox_wright(), z, cfg)?;
    let e_lo = mittag_leffler(&ml(beta - 1.0)?, z, cfg)?;
    let e = mittag_leffler(&ml(beta)?, z, cfg)?;
    let rhs = (e_lo.value - (beta - 1.0) * e.value) / (b * z);
    let rhs_err = (e_lo.error_bound() + (beta - 1.0) * e.error_bound()
        + 4.0 * f64::EPSILON * (e_lo.value.abs() + (beta - 1.0) * e.value.abs()))
        / (b * z).abs();
    let dev = (lhs.value - rhs).abs();
    let scale = lhs.value.abs().max(rhs.abs());
    let verdict = if dev <= 1e-10 * scale { Verdict::Pass } else { Verdict::Fail };
    Ok(InequalityReport {
        suite_id: "ml-derivative".into(),
        params_echo: serde_json::json!({ "B": b, "beta": beta, "form": "derivative-identity" }),
        z: ZSpec::Point(z),
        lhs: lhs.value,
        rhs,
        margin: -dev,
        verdict,
        err_estimate: lhs.error_bound() + rhs_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const E: f64 = std::f64::consts::E;
    const I0_2: f64 = 2.279_585_302_336_067_3;
    const I1_2: f64 = 1.590_636_854_637_329;

    fn cfg() -> EvalConfig<f64> {
        EvalConfig::default()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn pfq_examples() {
        let h = |u: &[f64], l: &[f64]| HypergeometricParams::new(u.to_vec(), l.to_vec()).unwrap();
        assert!(close(pfq(&h(&[1.0], &[1.0]), 1.0, &cfg()).unwrap().value, E, 1e-15));
        let r = pfq(&h(&[1.0, 1.0], &[2.0]), 0.5, &cfg()).unwrap();
        assert!(close(r.value, 2.0 * 2.0_f64.ln(), 1e-14));
        assert!(close(pfq(&h(&[1.0], &[1.0, 1.0]), 1.0, &cfg()).unwrap().value, I0_2, 1e-15));
    }

    #[test]
    fn pfq_gate() {
        let h = HypergeometricParams::new(vec![1.0, 1.0, 1.0], vec![1.0]).unwrap();
        assert!(matches!(pfq(&h, 0.1, &cfg()), Err(Error::Divergence(_))));
        let h = HypergeometricParams::new(vec![1.0, 1.0], vec![2.0]).unwrap();
        assert!(matches!(pfq(&h, 1.0, &cfg()), Err(Error::Divergence(_))));
        assert!(HypergeometricParams::new(vec![0.0], vec![1.0]).is_err());
    }

    #[test]
    fn mittag_leffler_examples() {
        let m = |v: Vec<(f64, f64)>| MittagLefflerParams::new(v).unwrap();
        assert!(close(mittag_leffler(&m(vec![(1.0, 1.0)]), 1.0, &cfg()).unwrap().value, E, 1e-15));
        let c = mittag_leffler(&m(vec![(2.0, 1.0)]), 1.0, &cfg()).unwrap().value;
        assert!(close(c, 1.0_f64.cosh(), 1e-15));
        let v = mittag_leffler(&m(vec![(1.0, 1.0), (1.0, 1.0)]), 1.0, &cfg()).unwrap().value;
        assert!(close(v, I0_2, 1e-15));
        assert!(MittagLefflerParams::new(vec![(0.0, 1.0), (0.0, 2.0)]).is_err());
    }

    #[test]
    fn wright_and_bessel_examples() {
        assert!(close(wright(0.0, 1.0, 1.0, false, &cfg()).unwrap().value, E, 1e-15));
        assert!(close(wright(1.0, 1.0, 1.0, false, &cfg()).unwrap().value, I0_2, 1e-15));
        assert!(close(wright(1.0, 2.0, 1.0, true, &cfg()).unwrap().value, I1_2, 1e-15));
        let ch = bessel_norm(-0.5, 1.0, &cfg()).unwrap().value;
        assert!(close(ch, 1.0_f64.cosh(), 1e-15));
        let sh = bessel_norm(0.5, 1.0, &cfg()).unwrap().value;
        assert!(close(sh, 1.0_f64.sinh(), 1e-15));
        assert!(close(bessel_norm(2.3, 0.0, &cfg()).unwrap().value, 1.0, 1e-15));
        assert!(matches!(bessel_norm(-1.0, 1.0, &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn kummer_examples() {
        let (l, r) = kummer_2f2_pair(1.0, 3.0, 2.0, 1.0, &cfg()).unwrap();
        assert!(close(l.value, E - 1.0, 1e-14) && close(r.value, E - 1.0, 1e-14));
        let (l, r) = kummer_2f2_pair(1.3, 2.2, 0.6, 0.0, &cfg()).unwrap();
        assert_eq!((l.value, r.value), (1.0, 1.0));
        let (l, r) = kummer_2f2_pair(2.0, 2.0, 1.0, 0.5, &cfg()).unwrap();
        assert!(close(l.value, r.value, 1e-12));
        assert!(matches!(kummer_2f2_pair(1.0, 2.0, 1.0, 0.5, &cfg()), Err(Error::SingularTransform(_))));
        assert!(matches!(kummer_2f2_pair(1.0, 3.0, 0.5, 0.5, &cfg()), Err(Error::Parameter(_))));
    }

    #[test]
    fn terminating_series() {
        // ₂F₂(−2, 1; 1, 1; z) = 1 − 2z + z²/2.
        let r = hypergeometric_series(&[-2.0, 1.0], &[1.0, 1.0], 3.0, &cfg()).unwrap();
        assert!(close(r.value, 1.0 - 6.0 + 4.5, 1e-15));
    }

    #[test]
    fn ml_derivative_identity_examples() {
        let r = ml_derivative_identity_check(1.0, 2.0, 1.0, &cfg()).unwrap();
        assert!(close(r.lhs, 1.0, 1e-14) && close(r.rhs, 1.0, 1e-14) && r.pass());
        assert!(ml_derivative_identity_check(1.0, 2.0, 0.0, &cfg()).is_err());
        assert!(ml_derivative_identity_check(1.0, 1.0, 1.0, &cfg()).is_err());
        assert!(ml_derivative_identity_check(0.5, 1.5, 2.0, &cfg()).unwrap().pass());
    }
}
