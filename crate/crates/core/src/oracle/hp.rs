//! Fox–Wright and hypergeometric series summed in big-float arithmetic.

use super::bigfloat::BigFloat;
use super::gamma::gamma;
use crate::error::{Error, Result};
use crate::Params;

/// Hard cap on the number of summed terms.
pub const MAX_TERMS: usize = 100_000;

/// A high-precision sum with its certified truncation bound.
#[derive(Debug, Clone)]
pub struct HpSum {
    pub value: BigFloat,
    /// Geometric bound on the omitted tail plus accumulated rounding.
    pub tail_bound: BigFloat,
    pub terms: usize,
    pub digits: u32,
}

impl HpSum {
    pub fn value_string(&self) -> String {
        self.value.to_decimal_string(self.digits as usize)
    }

    pub fn bound_string(&self) -> String {
        self.tail_bound.to_decimal_string(6)
    }
}

/// Working precision in bits: the requested digits plus 10 guard digits.
pub fn working_bits(digits: u32) -> u64 {
    ((digits as f64 + 10.0) * std::f64::consts::LOG2_10).ceil() as u64
}

fn check_digits(digits: u32) -> Result<()> {
    if !(30..=200).contains(&digits) {
        return Err(Error::Parameter(format!("digits = {digits} outside [30, 200]")));
    }
    Ok(())
}

/// ₚΨ_q(z) to `digits` significant digits, as (value, tail bound) decimal strings.
pub fn hp_eval(params: &Params, z: f64, digits: u32) -> Result<(String, String)> {
    let s = hp_eval_section(params, z, 0, digits)?;
    Ok((s.value_string(), s.bound_string()))
}

/// Σ_{k ≥ start} of the Fox–Wright terms.
pub fn hp_eval_section(params: &Params, z: f64, start: usize, digits: u32) -> Result<HpSum> {
    check_digits(digits)?;
    params.validate()?;
    if !z.is_finite() {
        return Err(Error::Domain(format!("z = {z} is not finite")));
    }
    let eps = crate::series::epsilon(params);
    if !(eps > 0.0) {
        return Err(Error::DivergentSeries(eps));
    }
    let bits = working_bits(digits);
    let wp = bits + 16;
    let zb = BigFloat::from_f64(z);
    let shifted = |base: f64, w: f64, k: usize| {
        BigFloat::from_f64(base).add_exact(&BigFloat::from_f64(w).mul_int(k as i64, u64::MAX))
    };
    // z^k / k! carried by recurrence from z^start / start!.
    let mut power = BigFloat::one();
    for k in 1..=start {
        power = power.mul(&zb, wp).div_int(k as i64, wp);
    }
    let term = |k: usize, power: &BigFloat| {
        let mut t = power.clone();
        for &(a, w) in &params.upper {
            t = t.mul(&gamma(&shifted(a, w, k), wp), wp);
        }
        for &(b, w) in &params.lower {
            t = t.div(&gamma(&shifted(b, w, k), wp), wp);
        }
        t
    };
    sum_terms(start, digits, wp, |k| {
        if k > start {
            power = power.mul(&zb, wp).div_int(k as i64, wp);
        }
        if power.is_zero() {
            return None;
        }
        Some(term(k, &power))
    })
}

/// Σ_k ∏(a)_k/∏(b)_k z^k/k! for arbitrary real upper parameters and positive lower ones.
pub fn hp_hypergeometric(upper: &[f64], lower: &[f64], z: f64, digits: u32) -> Result<HpSum> {
    check_digits(digits)?;
    if lower.iter().any(|&b| !(b > 0.0) || !b.is_finite()) || upper.iter().any(|a| !a.is_finite()) {
        return Err(Error::Parameter("lower parameters must be positive and all finite".into()));
    }
    let converges = upper.len() <= lower.len() || (upper.len() == lower.len() + 1 && z.abs() < 1.0);
    if !converges {
        return Err(Error::Divergence(format!(
            "{}F{} series diverges at z = {z}",
            upper.len(),
            lower.len()
        )));
    }
    let wp = working_bits(digits) + 16;
    let zb = BigFloat::from_f64(z);
    let ups: Vec<BigFloat> = upper.iter().map(|&a| BigFloat::from_f64(a)).collect();
    let lows: Vec<BigFloat> = lower.iter().map(|&b| BigFloat::from_f64(b)).collect();
    let mut t = BigFloat::one();
    sum_terms(0, digits, wp, |k| {
        if k > 0 {
            let j = BigFloat::from_int(k as i64 - 1);
            for a in &ups {
                t = t.mul(&a.add_exact(&j), wp);
            }
            for b in &lows {
                t = t.div(&b.add_exact(&j), wp);
            }
            t = t.mul(&zb, wp).div_int(k as i64, wp);
        }
        if t.is_zero() {
            None
        } else {
            Some(t.clone())
        }
    })
}

/// Sums terms from `start` until the geometric tail bound |t_k|·r/(1−r),
/// r = |t_k/t_{k−1}| < 1 with non-increasing ratios, falls below
/// 10^{−digits}·|partial|. `next` returns `None` once the series terminates.
fn sum_terms(start: usize, digits: u32, wp: u64, mut next: impl FnMut(usize) -> Option<BigFloat>) -> Result<HpSum> {
    // Truncate ten digits below the requested precision, matching the guard digits of `wp`.
    let target = BigFloat::parse_decimal(&format!("1e-{}", digits + 10), wp)?;
    let mut sum = BigFloat::zero();
    let mut abs_sum = BigFloat::zero();
    let mut prev: Option<BigFloat> = None;
    let mut prev_ratio: Option<BigFloat> = None;
    let one = BigFloat::one();
    for (n, k) in (start..start + MAX_TERMS).enumerate() {
        let Some(t) = next(k) else {
            return Ok(finish(sum, BigFloat::zero(), &abs_sum, n, digits, wp));
        };
        sum = sum.add(&t, wp);
        abs_sum = abs_sum.add(&t.abs(), wp);
        if let Some(p) = &prev {
            let r = t.abs().div(&p.abs(), wp);
            let decreasing = prev_ratio.as_ref().is_some_and(|q| r.cmp_value(q).is_le());
            if decreasing && r.cmp_value(&one).is_lt() {
                let tail = t.abs().mul(&r, wp).div(&one.sub(&r, wp), wp);
                if tail.cmp_value(&sum.abs().mul(&target, wp)).is_lt() {
                    return Ok(finish(sum, tail, &abs_sum, n + 1, digits, wp));
                }
            }
            prev_ratio = Some(r);
        }
        prev = Some(t);
    }
    Err(Error::NoConvergence(MAX_TERMS))
}

fn finish(value: BigFloat, tail: BigFloat, abs_sum: &BigFloat, terms: usize, digits: u32, wp: u64) -> HpSum {
    // Each term and partial sum carries a few units of 2^{−wp} relative error.
    let rounding = abs_sum.mul_int(4 * (terms as i64 + 1), wp).mul_pow2(-(wp as i64));
    HpSum { value, tail_bound: tail.add(&rounding, wp), terms, digits }
}

/// ln Γ(x) as a decimal string with `digits` significant digits.
pub fn hp_log_gamma(x: f64, digits: u32) -> Result<String> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log-gamma needs x > 0, got {x}")));
    }
    let bits = working_bits(digits);
    let v = super::gamma::log_gamma(&BigFloat::from_f64(x), bits);
    Ok(v.to_decimal_string(digits as usize))
}
