//! Double-length arithmetic (unevaluated sum hi + lo) for the log-term pipeline.

use crate::gammakit::{digamma_unchecked, log_gamma_unchecked, STIRLING};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd<T> {
    pub hi: T,
    pub lo: T,
}

pub(crate) fn two_sum<T: Scalar>(a: T, b: T) -> Dd<T> {
    let s = a + b;
    let bb = s - a;
    Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
}

fn quick_two_sum<T: Scalar>(a: T, b: T) -> Dd<T> {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

/// Dekker split of a into two halves of the mantissa.
fn split<T: Scalar>(a: T) -> (T, T) {
    let factor = if T::epsilon() < T::c(1e-10) { T::c(134_217_729.0) } else { T::c(4097.0) };
    let t = factor * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

fn two_prod<T: Scalar>(a: T, b: T) -> Dd<T> {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    Dd { hi: p, lo: ((ah * bh - p) + ah * bl + al * bh) + al * bl }
}

impl<T: Scalar> Dd<T> {
    pub fn from(x: T) -> Self {
        Dd { hi: x, lo: T::zero() }
    }

    /// A constant given as an f64 pair, re-split for narrower scalars.
    pub fn constant(hi: f64, lo: f64) -> Self {
        let h = T::c(hi);
        Dd { hi: h, lo: T::c((hi - h.to_f64_lossy()) + lo) }
    }

    pub fn add(self, o: Self) -> Self {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let r = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(r.hi, r.lo + t.lo)
    }

    pub fn neg(self) -> Self {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    pub fn mul(self, o: Self) -> Self {
        let p = two_prod(self.hi, o.hi);
        quick_two_sum(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }

    pub fn mul_t(self, b: T) -> Self {
        let p = two_prod(self.hi, b);
        quick_two_sum(p.hi, p.lo + self.lo * b)
    }

    pub fn div_t(self, b: T) -> Self {
        let q = self.hi / b;
        let p = two_prod(q, b);
        quick_two_sum(q, ((self.hi - p.hi) - p.lo + self.lo) / b)
    }

    /// Scaling by a power of two is exact.
    fn ldexp(self, n: i32) -> Self {
        let f = T::c(2.0).powi(n);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }
}

const LN2: (f64, f64) = (std::f64::consts::LN_2, 2.319_046_813_846_299_6e-17);
const HALF_LN_2PI: (f64, f64) = (0.918_938_533_204_672_8, -3.878_294_158_067_241_4e-17);

/// e^x; x is assumed to lie well inside the exponent range.
pub(crate) fn exp<T: Scalar>(x: Dd<T>) -> Dd<T> {
    let ln2 = Dd::<T>::constant(LN2.0, LN2.1);
    let n = (x.hi / ln2.hi).round();
    let r = x.sub(ln2.mul_t(n)).ldexp(-10);
    // e^r − 1 by Taylor, then (1 + s)² − 1 = s(2 + s) ten times.
    let mut term = r;
    let mut s = r;
    for i in 2..=10 {
        term = term.mul(r).div_t(T::c(i as f64));
        s = s.add(term);
    }
    for _ in 0..10 {
        s = s.mul(s.add(Dd::from(T::c(2.0))));
    }
    let one = Dd::from(T::one());
    one.add(s).ldexp(n.to_i32().unwrap_or(0))
}

/// ln x for x > 0: one Newton step y + x·e^{−y} − 1 from the scalar logarithm.
pub(crate) fn ln<T: Scalar>(x: Dd<T>) -> Dd<T> {
    let y = Dd::from(x.hi.ln());
    y.add(x.mul(exp(y.neg())).sub(Dd::from(T::one())))
}

/// ln Γ(x) for x > 0; Stirling in double length above 10, otherwise the
/// scalar kernel with a first-order correction for the low part.
pub(crate) fn log_gamma<T: Scalar>(x: Dd<T>) -> Dd<T> {
    if x.hi < T::c(10.0) {
        let g = log_gamma_unchecked(x.hi);
        return quick_two_sum(g, digamma_unchecked(x.hi) * x.lo);
    }
    let inv = x.hi.recip();
    let inv2 = inv * inv;
    let mut series = T::zero();
    for &c in STIRLING.iter().rev() {
        series = series * inv2 + T::c(c);
    }
    let half = Dd::from(T::c(0.5));
    x.sub(half)
        .mul(ln(x))
        .sub(x)
        .add(Dd::constant(HALF_LN_2PI.0, HALF_LN_2PI.1))
        .add(Dd::from(series * inv))
}

/// a + k·w formed exactly.
pub(crate) fn affine<T: Scalar>(a: T, k: T, w: T) -> Dd<T> {
    two_prod(k, w).add(Dd::from(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_and_ln_reach_double_length() {
        // e = 2.718281828459045 + 1.4456468917292502e-16.
        let e = exp(Dd::from(1.0f64));
        assert_eq!(e.hi, std::f64::consts::E);
        assert!((e.lo - 1.445_646_891_729_250_2e-16).abs() < 1e-30);
        let l = ln(Dd::from(10.0f64));
        // ln 10 = 2.302585092994046 − 2.1707562233822494e-16.
        assert_eq!(l.hi, std::f64::consts::LN_10);
        assert!((l.lo + 2.170_756_223_382_249_4e-16).abs() < 1e-30);
    }

    #[test]
    fn log_gamma_double_length() {
        // ln Γ(1000) = 5905.220423209181 + 4.0378203819938306e-13.
        let g = log_gamma(Dd::from(1000.0f64));
        assert!((g.hi - 5_905.220_423_209_181).abs() < 1e-12);
        let err = (g.hi - 5_905.220_423_209_181) + (g.lo - 4.037_820_381_993_830_6e-13);
        assert!(err.abs() < 1e-19, "{err:e}");
    }
}
