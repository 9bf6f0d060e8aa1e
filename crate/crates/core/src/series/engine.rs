use super::{EvalConfig, EvalResult, FoxWrightParams, NeumaierSum, TailSpec};
use crate::error::{Error, Result};
use crate::gammakit::{digamma_unchecked, log_gamma_unchecked};
use crate::dd::{self, Dd};
use crate::scalar::Scalar;

/// One series term in log form.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogTerm<T> {
    pub log_abs: T,
    /// Low-order part of the logarithm (double-length log-terms).
    pub log_lo: T,
    /// ±1, or 0 for an exactly vanishing term.
    pub sign: i8,
    /// Magnitude of the quantities rounded into `log_abs`; scales the rounding estimate.
    pub mag: T,
}

/// A summation request over a term generator.
pub(crate) struct SeriesJob<T> {
    pub start: usize,
    pub cfg: EvalConfig<T>,
    /// Lower bound applied to the last term ratio when forming the tail bound.
    pub ratio_floor: Option<T>,
}

/// Rescale the running sum once a term exceeds the reference by this many nats.
const RESCALE_LOG: f64 = 300.0;

/// Sums terms from `gen(start), gen(start+1), …`; `gen` returns `None` once the
/// series has terminated exactly. The stop rule runs on a rough running sum;
/// the returned value is re-summed relative to the largest term.
pub(crate) fn sum_series<T, G>(job: &SeriesJob<T>, mut gen: G) -> Result<EvalResult<T>>
where
    T: Scalar,
    G: FnMut(usize) -> Option<LogTerm<T>>,
{
    let cfg = &job.cfg;
    let log_max = T::max_value().ln();
    let mut terms: Vec<LogTerm<T>> = Vec::new();
    let mut running = T::zero();
    let mut reference: Option<T> = None;
    let mut prev_log: Option<T> = None;
    let mut small_run = 0usize;
    let mut tail_log: Option<T> = None;
    let mut done = false;

    while terms.len() < cfg.max_terms {
        let k = job.start + terms.len();
        let Some(term) = gen(k) else {
            done = true;
            break;
        };
        if term.sign != 0 && !cfg.log_mode && term.log_abs > log_max {
            return Err(Error::Overflow(term.log_abs.to_f64_lossy()));
        }
        terms.push(term);
        let a = if term.sign == 0 {
            T::zero()
        } else {
            let r = *reference.get_or_insert(term.log_abs);
            if term.log_abs - r > T::c(RESCALE_LOG) {
                running = running * (r - term.log_abs).exp();
                reference = Some(term.log_abs);
            }
            (term.log_abs - reference.unwrap_or(term.log_abs)).exp()
        };
        running = if term.sign < 0 { running - a } else { running + a };

        let ratio = match (prev_log, term.sign) {
            (_, 0) => T::zero(),
            (Some(p), _) => (term.log_abs - p).exp(),
            (None, _) => T::infinity(),
        };
        prev_log = if term.sign == 0 { None } else { Some(term.log_abs) };

        let s = running.abs();
        if a <= cfg.rel_tol * s || (a == T::zero() && s == T::zero()) {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 3 {
            let r = match job.ratio_floor {
                Some(f) => ratio.max(f),
                None => ratio,
            };
            if r < T::one() {
                if term.sign != 0 && r > T::zero() {
                    tail_log = Some(term.log_abs + term.log_lo + (r / (T::one() - r)).ln());
                }
                done = true;
                break;
            }
        }
    }
    if !done {
        return Err(Error::NoConvergence(terms.len()));
    }
    let mut out = resum(&terms);
    out.tail_bound = tail_log.map_or(T::zero(), |l| l.exp());
    if !cfg.log_mode && out.sign != 0 && out.log_magnitude > log_max {
        return Err(Error::Overflow(out.log_magnitude.to_f64_lossy()));
    }
    Ok(out)
}

/// Compensated sum of the terms scaled by the largest one.
fn resum<T: Scalar>(terms: &[LogTerm<T>]) -> EvalResult<T> {
    let eps = T::epsilon();
    let top = terms
        .iter()
        .filter(|t| t.sign != 0)
        .map(|t| t.log_abs)
        .fold(T::neg_infinity(), |m, x| m.max(x));
    let top = if top.is_finite() { top } else { T::zero() };
    let mut sum = NeumaierSum::new();
    let mut abs_sum = T::zero();
    let mut rounding = T::zero();
    let mut any_negative = false;
    for t in terms.iter().filter(|t| t.sign != 0) {
        let d = dd::two_sum(t.log_abs, -top);
        let x = d.hi + (d.lo + t.log_lo);
        let a = x.exp();
        if t.sign < 0 {
            any_negative = true;
            sum.add(-a);
        } else {
            sum.add(a);
        }
        abs_sum = abs_sum + a;
        rounding = rounding + a * eps * (x.abs() + T::c(2.0) * t.mag + T::c(4.0));
    }
    let s = sum.value();
    let sign = if s > T::zero() {
        1
    } else if s < T::zero() {
        -1
    } else {
        0
    };
    let scale = top.exp();
    let condition_estimate = if !any_negative {
        T::one()
    } else if sign == 0 {
        T::infinity()
    } else {
        abs_sum / s.abs()
    };
    EvalResult {
        value: if sign == 0 { T::zero() } else { s * scale },
        log_magnitude: s.abs().ln() + top,
        sign,
        terms_used: terms.len(),
        tail_bound: T::zero(),
        condition_estimate,
        rounding_estimate: (rounding + eps * T::c(2.0) * abs_sum) * scale,
    }
}

/// ln|term_k| in double length for z ≠ 0; `ln_abs_z` is ln|z| in double length.
pub(crate) fn log_term<T: Scalar>(params: &FoxWrightParams<T>, ln_abs_z: Dd<T>, k: usize) -> Dd<T> {
    let kk = T::from_usize_lossy(k);
    let mut l = Dd::from(T::zero());
    for &(a, w) in &params.upper {
        l = l.add(dd::log_gamma(dd::affine(a, kk, w)));
    }
    for &(b, w) in &params.lower {
        l = l.sub(dd::log_gamma(dd::affine(b, kk, w)));
    }
    let lf = dd::log_gamma(Dd::from(kk + T::one()));
    let lz = if k == 0 { Dd::from(T::zero()) } else { ln_abs_z.mul_t(kk) };
    l.add(lz).sub(lf)
}

/// Rounding magnitude of a double-length log-term.
fn term_mag<T: Scalar>(params: &FoxWrightParams<T>, log_offset: T) -> T {
    T::from_usize_lossy(params.p() + params.q() + 2) * T::c(1e-6) + log_offset.abs()
}

/// Fox–Wright sum with an optional log prefactor and per-term weight.
pub(crate) fn fox_wright_sum<T: Scalar>(
    params: &FoxWrightParams<T>,
    z: T,
    cfg: &EvalConfig<T>,
    start: usize,
    log_offset: T,
    weight: Option<&dyn Fn(usize) -> T>,
    ratio_floor: Option<T>,
) -> Result<EvalResult<T>> {
    let job = SeriesJob { start, cfg: *cfg, ratio_floor };
    let negative = z < T::zero();
    if z == T::zero() {
        // Only the k = 0 term can survive.
        let stop = start > 0;
        return sum_series(&job, |k| {
            if stop || k > 0 {
                return None;
            }
            Some(weighted(params_term0(params, log_offset), weight, 0))
        });
    }
    let ln_abs_z = dd::ln(Dd::from(z.abs()));
    sum_series(&job, |k| {
        let sign = if negative && k % 2 == 1 { -1 } else { 1 };
        let t = dd_term(log_term(params, ln_abs_z, k), log_offset, sign, term_mag(params, log_offset));
        Some(weighted(t, weight, k))
    })
}

fn dd_term<T: Scalar>(l: Dd<T>, log_offset: T, sign: i8, mag: T) -> LogTerm<T> {
    let l = l.add(Dd::from(log_offset));
    LogTerm { log_abs: l.hi, log_lo: l.lo, sign, mag }
}

fn params_term0<T: Scalar>(params: &FoxWrightParams<T>, log_offset: T) -> LogTerm<T> {
    let l = log_term(params, Dd::from(T::zero()), 0);
    dd_term(l, log_offset, 1, term_mag(params, log_offset))
}

fn weighted<T: Scalar>(mut t: LogTerm<T>, weight: Option<&dyn Fn(usize) -> T>, k: usize) -> LogTerm<T> {
    if let Some(w) = weight {
        let v = w(k);
        if v == T::zero() {
            t.sign = 0;
            t.log_abs = T::neg_infinity();
        } else {
            let l = Dd { hi: t.log_abs, lo: t.log_lo }.add(Dd::from(v.abs().ln()));
            t.log_abs = l.hi;
            t.log_lo = l.lo;
            if v < T::zero() {
                t.sign = -t.sign;
            }
            t.mag = t.mag + T::c(8.0) * (T::one() + v.abs().recip());
        }
    }
    t
}

fn checked<T: Scalar>(params: &FoxWrightParams<T>, cfg: &EvalConfig<T>, z: T) -> Result<()> {
    cfg.validate()?;
    params.validate()?;
    if !z.is_finite() {
        return Err(Error::Domain(format!("z = {z} is not finite")));
    }
    let e = epsilon(params);
    if !(e > T::zero()) {
        return Err(Error::DivergentSeries(e.to_f64_lossy()));
    }
    Ok(())
}

fn need_lower<T: Scalar>(params: &FoxWrightParams<T>) -> Result<()> {
    if params.lower.is_empty() {
        return Err(Error::Parameter("operation needs q >= 1".into()));
    }
    Ok(())
}

/// Sum with a log prefactor; with a ratio floor the ε gate is skipped
/// (ε = 0 hypergeometric case, |z| < 1 checked by the caller).
pub(crate) fn engine_sum<T: Scalar>(
    params: &FoxWrightParams<T>,
    z: T,
    cfg: &EvalConfig<T>,
    log_offset: T,
    ratio_floor: Option<T>,
) -> Result<EvalResult<T>> {
    if ratio_floor.is_none() {
        checked(params, cfg, z)?;
    } else {
        cfg.validate()?;
        params.validate()?;
    }
    fox_wright_sum(params, z, cfg, 0, log_offset, None, ratio_floor)
}

/// ε = 1 + ΣB − ΣA.
pub fn epsilon<T: Scalar>(params: &FoxWrightParams<T>) -> T {
    let sb = params.lower.iter().fold(T::zero(), |s, &(_, w)| s + w);
    let sa = params.upper.iter().fold(T::zero(), |s, &(_, w)| s + w);
    T::one() + sb - sa
}

/// ₚΨ_q(z).
pub fn eval<T: Scalar>(params: &FoxWrightParams<T>, z: T, cfg: &EvalConfig<T>) -> Result<EvalResult<T>> {
    checked(params, cfg, z)?;
    fox_wright_sum(params, z, cfg, 0, T::zero(), None, None)
}

/// ₚΨ*_q(z) = [∏Γ(β)/∏Γ(α)] ₚΨ_q(z).
pub fn eval_normalized<T: Scalar>(
    params: &FoxWrightParams<T>,
    z: T,
    cfg: &EvalConfig<T>,
) -> Result<EvalResult<T>> {
    checked(params, cfg, z)?;
    let offset = params.lower.iter().fold(T::zero(), |s, &(b, _)| s + log_gamma_unchecked(b))
        - params.upper.iter().fold(T::zero(), |s, &(a, _)| s + log_gamma_unchecked(a));
    fox_wright_sum(params, z, cfg, 0, offset, None, None)
}

/// Γ(β₁) ₚΨ_q(z).
pub fn eval_tilde<T: Scalar>(params: &FoxWrightParams<T>, z: T, cfg: &EvalConfig<T>) -> Result<EvalResult<T>> {
    need_lower(params)?;
    checked(params, cfg, z)?;
    let offset = log_gamma_unchecked(params.lower[0].0);
    fox_wright_sum(params, z, cfg, 0, offset, None, None)
}

/// ₚΨ_qⁿ(z) = Σ_{k ≥ n+1} term_k, summed from k = n + 1.
pub fn eval_tail<T: Scalar>(
    params: &FoxWrightParams<T>,
    tail: TailSpec,
    z: T,
    cfg: &EvalConfig<T>,
) -> Result<EvalResult<T>> {
    checked(params, cfg, z)?;
    fox_wright_sum(params, z, cfg, tail.start(), T::zero(), None, None)
}

/// d/dz ₚΨ_q(z) = ₚΨ_q[(α+A, A); (β+B, B)](z).
pub fn derivative<T: Scalar>(params: &FoxWrightParams<T>, z: T, cfg: &EvalConfig<T>) -> Result<EvalResult<T>> {
    checked(params, cfg, z)?;
    fox_wright_sum(&params.shifted(), z, cfg, 0, T::zero(), None, None)
}

/// ∂/∂β₁ ₚΨ_q(z) = −Σ ψ(β₁ + kB₁) term_k.
pub fn dbeta1<T: Scalar>(params: &FoxWrightParams<T>, z: T, cfg: &EvalConfig<T>) -> Result<EvalResult<T>> {
    need_lower(params)?;
    checked(params, cfg, z)?;
    let (b1, w1) = params.lower[0];
    let weight = move |k: usize| -digamma_unchecked(b1 + T::from_usize_lossy(k) * w1);
    fox_wright_sum(params, z, cfg, 0, T::zero(), Some(&weight), None)
}

/// Σ_{k=0}^{n} term_k; n < 0 gives 0.
pub fn head_partial_sum<T: Scalar>(params: &FoxWrightParams<T>, n: i64, z: T) -> Result<T> {
    params.validate()?;
    let mut s = NeumaierSum::new();
    if n < 0 {
        return Ok(T::zero());
    }
    let ln_abs_z = if z == T::zero() { Dd::from(T::zero()) } else { dd::ln(Dd::from(z.abs())) };
    for k in 0..=(n as usize) {
        if k > 0 && z == T::zero() {
            break;
        }
        let l = log_term(params, ln_abs_z, k);
        let sign = if z < T::zero() && k % 2 == 1 { -T::one() } else { T::one() };
        s.add(sign * l.hi.exp() * l.lo.exp());
    }
    Ok(s.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fw(upper: &[(f64, f64)], lower: &[(f64, f64)]) -> FoxWrightParams<f64> {
        FoxWrightParams::new(upper.to_vec(), lower.to_vec()).unwrap()
    }

    fn cfg() -> EvalConfig<f64> {
        EvalConfig::default()
    }

    const E: f64 = std::f64::consts::E;
    // Σ 1/(k!)² and Σ 1/(k!(k+1)!), summed by brute force in the oracle tests.
    const I0_2: f64 = 2.279_585_302_336_067_3;
    const I1_2: f64 = 1.590_636_854_637_329;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon(&fw(&[(1.0, 1.0)], &[(1.0, 1.0)])), 1.0);
        assert_eq!(epsilon(&fw(&[(1.0, 1.0)], &[(1.0, 0.5), (1.0, 1.0)])), 1.5);
        assert_eq!(epsilon(&fw(&[(1.0, 2.0)], &[(1.0, 0.5)])), -0.5);
    }

    #[test]
    fn eval_examples() {
        let r = eval(&fw(&[(1.0, 1.0)], &[(1.0, 1.0)]), 1.0, &cfg()).unwrap();
        assert!(close(r.value, E, 1e-15));
        assert_eq!(r.condition_estimate, 1.0);
        let r = eval(&fw(&[(1.0, 1.0)], &[(1.0, 1.0), (1.0, 1.0)]), 1.0, &cfg()).unwrap();
        assert!(close(r.value, I0_2, 1e-15));
        let p = fw(&[(2.5, 0.5), (1.5, 1.0)], &[(3.0, 0.7)]);
        let r = eval(&p, 0.0, &cfg()).unwrap();
        let g = |x: f64| log_gamma_unchecked(x);
        assert!(close(r.value, (g(2.5) + g(1.5) - g(3.0)).exp(), 1e-15));
    }

    #[test]
    fn eval_exp_as_0psi0() {
        let p = fw(&[], &[]);
        let r = eval(&p, 2.0, &cfg()).unwrap();
        assert!(close(r.value, 2.0_f64.exp(), 1e-15));
        let r = eval(&p, -3.0, &cfg()).unwrap();
        assert!(close(r.value, (-3.0_f64).exp(), 1e-13));
        assert!(r.condition_estimate > 1.0);
    }

    #[test]
    fn eval_errors() {
        let bad = FoxWrightParams { upper: vec![(-1.0, 1.0)], lower: vec![] };
        assert!(matches!(eval(&bad, 1.0, &cfg()), Err(Error::Parameter(_))));
        let neg_w = FoxWrightParams { upper: vec![(1.0, -1.0)], lower: vec![] };
        assert!(matches!(eval(&neg_w, 1.0, &cfg()), Err(Error::Parameter(_))));
        let div = fw(&[(1.0, 2.0)], &[(1.0, 0.5)]);
        assert!(matches!(eval(&div, 1.0, &cfg()), Err(Error::DivergentSeries(_))));
        let tiny = EvalConfig { max_terms: 8, ..cfg() };
        let p = fw(&[(1.0, 1.0)], &[(1.0, 1.0)]);
        assert!(matches!(eval(&p, 50.0, &tiny), Err(Error::NoConvergence(8))));
        let huge = fw(&[], &[]);
        assert!(matches!(eval(&huge, 800.0, &cfg()), Err(Error::Overflow(_))));
        let r = eval(&huge, 800.0, &cfg().with_log_mode(true)).unwrap();
        assert!((r.log_magnitude - 800.0).abs() < 1e-10 && r.sign == 1);
    }

    #[test]
    fn normalized_and_tilde() {
        let c = cfg();
        let p = fw(&[(2.7, 0.3)], &[(1.4, 1.2), (0.8, 0.5)]);
        assert!(close(eval_normalized(&p, 0.0, &c).unwrap().value, 1.0, 1e-15));
        let r = eval_normalized(&fw(&[(1.0, 1.0)], &[(1.0, 1.0), (1.0, 1.0)]), 1.0, &c).unwrap();
        assert!(close(r.value, I0_2, 1e-15));
        let r = eval_normalized(&fw(&[(2.0, 1.0)], &[(1.0, 1.0)]), 1.0, &c).unwrap();
        assert!(close(r.value, 2.0 * E, 1e-15));
        let p1 = fw(&[(1.5, 0.5)], &[(1.0, 0.6)]);
        assert!(close(eval_tilde(&p1, 0.7, &c).unwrap().value, eval(&p1, 0.7, &c).unwrap().value, 1e-15));
        let p3 = fw(&[(1.5, 0.5)], &[(3.0, 0.6)]);
        let t = eval_tilde(&p3, 0.0, &c).unwrap().value;
        assert!(close(t, 2.0 * eval(&p3, 0.0, &c).unwrap().value, 1e-15));
        let r = eval_tilde(&fw(&[(1.0, 1.0)], &[(2.0, 1.0), (1.0, 1.0)]), 1.0, &c).unwrap();
        assert!(close(r.value, I1_2, 1e-15));
        assert!(matches!(eval_tilde(&fw(&[(1.0, 1.0)], &[]), 1.0, &c), Err(Error::Parameter(_))));
    }

    #[test]
    fn tails() {
        let c = cfg();
        let p = fw(&[(1.0, 1.0)], &[(1.0, 1.0)]);
        let full = eval(&p, 1.0, &c).unwrap().value;
        assert_eq!(eval_tail(&p, TailSpec::full(), 1.0, &c).unwrap().value, full);
        let t0 = eval_tail(&p, TailSpec::new(0).unwrap(), 1.0, &c).unwrap().value;
        assert!(close(t0, E - 1.0, 1e-15));
        let q = fw(&[(1.0, 0.0)], &[(1.0, 1.0)]);
        let t1 = eval_tail(&q, TailSpec::new(1).unwrap(), 1.0, &c).unwrap().value;
        assert!(close(t1, I0_2 - 2.0, 1e-14));
        assert!(TailSpec::new(-2).is_err());
        assert_eq!(eval_tail(&q, TailSpec::new(0).unwrap(), 0.0, &c).unwrap().value, 0.0);
    }

    #[test]
    fn derivatives() {
        let c = cfg();
        let r = derivative(&fw(&[(1.0, 1.0)], &[(1.0, 1.0)]), 1.0, &c).unwrap();
        assert!(close(r.value, E, 1e-15));
        let r = derivative(&fw(&[(1.0, 1.0)], &[(1.0, 1.0), (1.0, 1.0)]), 1.0, &c).unwrap();
        assert!(close(r.value, I1_2, 1e-15));
        // At z = 0 only the k = 0 term survives: −ψ(2).
        let p = fw(&[(1.0, 1.0)], &[(2.0, 1.0), (1.0, 1.0)]);
        let r = dbeta1(&p, 0.0, &c).unwrap();
        assert!(close(r.value, -0.422_784_335_098_467_1, 1e-15));
        let p0 = fw(&[(1.5, 1.0)], &[(2.0, 0.0), (1.0, 1.0)]);
        let d = dbeta1(&p0, 0.8, &c).unwrap().value;
        let v = eval(&p0, 0.8, &c).unwrap().value;
        assert!(close(d, -digamma_unchecked(2.0) * v, 1e-14));
    }

    #[test]
    fn head_plus_tail_is_full() {
        let c = cfg();
        let p = fw(&[(1.3, 0.4)], &[(2.1, 0.9)]);
        let full = eval(&p, 3.0, &c).unwrap();
        for n in [0, 1, 2, 5] {
            let tail = eval_tail(&p, TailSpec::new(n).unwrap(), 3.0, &c).unwrap();
            let head = head_partial_sum(&p, n, 3.0).unwrap();
            let diff = (head + tail.value - full.value).abs();
            assert!(diff <= full.error_bound() + tail.error_bound() + 4.0 * f64::EPSILON * full.value);
        }
    }

    #[test]
    fn single_precision_engine() {
        let p: FoxWrightParams<f32> = FoxWrightParams::new(vec![(1.0, 1.0)], vec![(1.0, 1.0)]).unwrap();
        let r = eval(&p, 1.0_f32, &EvalConfig::default()).unwrap();
        assert!((r.value - std::f32::consts::E).abs() < 1e-5);
    }
}
