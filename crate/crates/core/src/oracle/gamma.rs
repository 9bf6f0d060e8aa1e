//! Γ at arbitrary precision via Spouge's approximation.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use super::bigfloat::{exp, ln, pi, BigFloat};

/// Spouge parameter a and working precision for a target of `bits`.
fn plan(bits: u64) -> (i64, u64) {
    let a = (0.3773 * bits as f64).ceil() as i64 + 2;
    (a, bits + 2 * a as u64 + 64)
}

thread_local! {
    static COEFFS: RefCell<HashMap<u64, Rc<Vec<BigFloat>>>> = RefCell::new(HashMap::new());
}

/// c₀ = √(2π), c_k = (−1)^{k−1}/(k−1)! · (a−k)^{k−½} e^{a−k}.
fn coefficients(bits: u64) -> Rc<Vec<BigFloat>> {
    if let Some(c) = COEFFS.with(|m| m.borrow().get(&bits).cloned()) {
        return c;
    }
    let (a, wp) = plan(bits);
    let mut c = Vec::with_capacity(a as usize);
    c.push(pi(wp).mul_pow2(1).sqrt(wp));
    let mut fact = BigFloat::one();
    for k in 1..a {
        if k > 1 {
            fact = fact.mul_int(k - 1, wp);
        }
        let base = BigFloat::from_int(a - k);
        let power = BigFloat::from_int(2 * k - 1).mul_pow2(-1).mul(&ln(&base, wp), wp);
        let mag = exp(&power.add(&BigFloat::from_int(a - k), wp), wp).div(&fact, wp);
        c.push(if k % 2 == 1 { mag } else { mag.neg() });
    }
    let c = Rc::new(c);
    COEFFS.with(|m| m.borrow_mut().insert(bits, c.clone()));
    c
}

/// Γ(x) for x > 0 with relative error below 2^{−bits}.
pub fn gamma(x: &BigFloat, bits: u64) -> BigFloat {
    assert!(x.signum() > 0, "gamma needs a positive argument");
    let (a, wp) = plan(bits);
    let one = BigFloat::one();
    if x.cmp_value(&one) == std::cmp::Ordering::Less {
        return gamma(&x.add(&one, wp), bits).div(x, bits);
    }
    let c = coefficients(bits);
    // Γ(z+1) with z = x − 1.
    let z = x.sub(&one, wp);
    let mut s = c[0].clone();
    for (k, ck) in c.iter().enumerate().skip(1) {
        s = s.add(&ck.div(&z.add(&BigFloat::from_int(k as i64), wp), wp), wp);
    }
    let za = z.add(&BigFloat::from_int(a), wp);
    let half = BigFloat::one().mul_pow2(-1);
    let log_part = z.add(&half, wp).mul(&ln(&za, wp), wp).sub(&za, wp);
    exp(&log_part, wp).mul(&s, wp).round(bits)
}

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: &BigFloat, bits: u64) -> BigFloat {
    ln(&gamma(x, bits + 16), bits)
}
