//! Binary floating point over `BigInt`: value = mantissa · 2^exponent.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigFloat {
    m: BigInt,
    e: i64,
}

fn round_shift(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let (sign, mag) = (m.sign(), m.magnitude());
    let half = BigUint::one() << (s - 1);
    let r = (mag + half) >> s;
    BigInt::from_biguint(sign, r)
}

fn pow10(n: u64) -> BigInt {
    num_traits::pow(BigInt::from(10u32), n as usize)
}

/// Rounded quotient of integers, ties away from zero.
fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_rem(d);
    if (r.abs() << 1u32) >= d.abs() {
        if (n.sign() == Sign::Minus) != (d.sign() == Sign::Minus) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat { m: BigInt::zero(), e: 0 }
    }

    pub fn one() -> Self {
        BigFloat { m: BigInt::one(), e: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        BigFloat { m: BigInt::from(n), e: 0 }
    }

    pub fn from_bigint(m: BigInt) -> Self {
        BigFloat { m, e: 0 }
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "BigFloat::from_f64 needs a finite value");
        if x == 0.0 {
            return Self::zero();
        }
        let (mant, exp, sign) = Float::integer_decode(x);
        let m = BigInt::from(mant) * BigInt::from(sign);
        BigFloat { m, e: exp as i64 }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn signum(&self) -> i8 {
        match self.m.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn neg(&self) -> Self {
        BigFloat { m: -self.m.clone(), e: self.e }
    }

    pub fn abs(&self) -> Self {
        BigFloat { m: self.m.abs(), e: self.e }
    }

    /// ⌊log₂|x|⌋ + 1; meaningless for zero.
    pub fn top(&self) -> i64 {
        self.m.bits() as i64 + self.e
    }

    pub fn round(&self, prec: u64) -> Self {
        let b = self.m.bits();
        if b <= prec {
            return self.clone();
        }
        let s = b - prec;
        BigFloat { m: round_shift(&self.m, s), e: self.e + s as i64 }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        BigFloat { m: self.m.clone(), e: self.e + k }
    }

    /// Exact sum, for operands whose exponents are close.
    pub fn add_exact(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.e.min(o.e);
        let m = (&self.m << (self.e - e) as u64) + (&o.m << (o.e - e) as u64);
        BigFloat { m, e }
    }

    pub fn add(&self, o: &Self, prec: u64) -> Self {
        if self.is_zero() {
            return o.round(prec);
        }
        if o.is_zero() {
            return self.round(prec);
        }
        let gap = prec as i64 + 4;
        if self.top() - o.top() > gap && o.top() < self.e {
            return self.round(prec);
        }
        if o.top() - self.top() > gap && self.top() < o.e {
            return o.round(prec);
        }
        self.add_exact(o).round(prec)
    }

    pub fn sub(&self, o: &Self, prec: u64) -> Self {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Self, prec: u64) -> Self {
        BigFloat { m: &self.m * &o.m, e: self.e + o.e }.round(prec)
    }

    pub fn mul_int(&self, n: i64, prec: u64) -> Self {
        BigFloat { m: &self.m * n, e: self.e }.round(prec)
    }

    pub fn div(&self, o: &Self, prec: u64) -> Self {
        assert!(!o.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let s = (prec as i64 + 2 + o.m.bits() as i64 - self.m.bits() as i64).max(0) as u64;
        let q = (&self.m << s) / &o.m;
        BigFloat { m: q, e: self.e - o.e - s as i64 }.round(prec)
    }

    pub fn div_int(&self, n: i64, prec: u64) -> Self {
        self.div(&BigFloat::from_int(n), prec)
    }

    pub fn recip(&self, prec: u64) -> Self {
        Self::one().div(self, prec)
    }

    pub fn cmp_value(&self, o: &Self) -> Ordering {
        let d = self.sub(o, self.m.bits().max(o.m.bits()) + 8);
        if d.top() < self.top().max(o.top()) - self.m.bits().max(o.m.bits()) as i64 - 4 && self.add_exact(&o.neg()).is_zero() {
            return Ordering::Equal;
        }
        match self.add_exact(&o.neg()).signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn sqrt(&self, prec: u64) -> Self {
        assert!(self.signum() >= 0, "BigFloat::sqrt of a negative value");
        if self.is_zero() {
            return Self::zero();
        }
        let mut s = (2 * (prec + 2)).saturating_sub(self.m.bits()) as i64;
        if (self.e - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let mag = self.m.magnitude() << s as u64;
        BigFloat { m: BigInt::from(mag.sqrt()), e: (self.e - s) / 2 }.round(prec)
    }

    /// Nearest double (ties away from zero), with overflow to ±inf.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(53);
        let m = r.m.to_f64().expect("53-bit mantissa fits");
        ldexp(m, r.e)
    }

    /// Natural logarithm of |x| as a double, valid far outside the f64 range.
    pub fn ln_abs_f64(&self) -> f64 {
        let b = self.m.bits();
        let s = b.saturating_sub(60);
        let top = (self.m.abs() >> s).to_f64().expect("fits");
        top.ln() + (self.e + s as i64) as f64 * std::f64::consts::LN_2
    }

    /// `digits` significant decimal digits as `[-]d.ddd…e<exp>`.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            let mut s = String::from("0");
            if digits > 1 {
                s.push('.');
                s.push_str(&"0".repeat(digits - 1));
            }
            s.push_str("e0");
            return s;
        }
        let l2 = self.top() - 1;
        let mut e10 = ((l2 as f64) * std::f64::consts::LOG10_2).floor() as i64;
        let lo = pow10(digits as u64 - 1);
        let hi = pow10(digits as u64);
        let mut n;
        loop {
            let shift = digits as i64 - 1 - e10;
            let mut num = self.m.abs();
            let mut den = BigInt::one();
            if shift >= 0 {
                num *= pow10(shift as u64);
            } else {
                den *= pow10((-shift) as u64);
            }
            if self.e >= 0 {
                num <<= self.e as u64;
            } else {
                den <<= (-self.e) as u64;
            }
            n = div_round(&num, &den);
            if n >= hi {
                e10 += 1;
            } else if n < lo {
                e10 -= 1;
            } else {
                break;
            }
        }
        let ds = n.to_string();
        let mut s = String::new();
        if self.signum() < 0 {
            s.push('-');
        }
        s.push_str(&ds[..1]);
        if ds.len() > 1 {
            s.push('.');
            s.push_str(&ds[1..]);
        }
        s.push('e');
        s.push_str(&e10.to_string());
        s
    }

    /// Parses `[-+]digits[.digits][e[-+]digits]` to `prec` bits.
    pub fn parse_decimal(text: &str, prec: u64) -> Result<Self> {
        let bad = || Error::Parameter(format!("malformed decimal string {text:?}"));
        let t = text.trim();
        let (neg, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (mant, exp) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], body[i + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (body, 0),
        };
        let (int_part, frac_part) = match mant.find('.') {
            Some(i) => (&mant[..i], &mant[i + 1..]),
            None => (mant, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut d: BigInt = digits.parse().map_err(|_| bad())?;
        if neg {
            d = -d;
        }
        let t10 = exp - frac_part.len() as i64;
        let v = if t10 >= 0 {
            BigFloat::from_bigint(d * pow10(t10 as u64)).round(prec)
        } else {
            BigFloat::from_bigint(d).div(&BigFloat::from_bigint(pow10((-t10) as u64)), prec)
        };
        Ok(v)
    }
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// Σ_k s^k / ((2k+1) n^{2k+1}) in fixed point with `bits` fractional bits;
/// s = +1 gives atanh(1/n), s = −1 gives atan(1/n).
fn arc_recip(n: u64, bits: u64, alternating: bool) -> BigInt {
    let one = BigInt::one() << bits;
    let n = BigInt::from(n);
    let n2 = &n * &n;
    let mut power = &one / &n;
    let mut sum = power.clone();
    let mut k: u64 = 1;
    while !power.is_zero() {
        power /= &n2;
        let term = &power / BigInt::from(2 * k + 1);
        if alternating && k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

thread_local! {
    static CONSTANTS: RefCell<HashMap<(u8, u64), BigFloat>> = RefCell::new(HashMap::new());
}

fn cached(tag: u8, prec: u64, make: impl FnOnce() -> BigFloat) -> BigFloat {
    if let Some(v) = CONSTANTS.with(|c| c.borrow().get(&(tag, prec)).cloned()) {
        return v;
    }
    let v = make();
    CONSTANTS.with(|c| c.borrow_mut().insert((tag, prec), v.clone()));
    v
}

/// ln 2 = 2 atanh(1/3).
pub fn ln2(prec: u64) -> BigFloat {
    cached(0, prec, || {
        let w = prec + 16;
        BigFloat { m: arc_recip(3, w, false) << 1u32, e: -(w as i64) }.round(prec)
    })
}

/// π = 16 atan(1/5) − 4 atan(1/239).
pub fn pi(prec: u64) -> BigFloat {
    cached(1, prec, || {
        let w = prec + 16;
        let m = (arc_recip(5, w, true) << 4u32) - (arc_recip(239, w, true) << 2u32);
        BigFloat { m, e: -(w as i64) }.round(prec)
    })
}

/// e^x.
pub fn exp(x: &BigFloat, prec: u64) -> BigFloat {
    if x.is_zero() {
        return BigFloat::one();
    }
    let approx = x.to_f64();
    assert!(approx.abs() < 1e15, "exp argument out of range");
    let n = (approx / std::f64::consts::LN_2).round() as i64;
    let nbits = 64 - n.unsigned_abs().leading_zeros() as u64;
    let halvings = ((prec as f64).sqrt() / 2.0).ceil() as u64;
    let wp = prec + nbits + halvings + 24;
    let r = x.sub(&ln2(wp).mul_int(n, wp), wp).mul_pow2(-(halvings as i64));
    let mut sum = BigFloat::one();
    let mut term = BigFloat::one();
    let mut i = 1i64;
    loop {
        term = term.mul(&r, wp).div_int(i, wp);
        if term.is_zero() || term.top() < -(wp as i64) {
            break;
        }
        sum = sum.add(&term, wp);
        i += 1;
    }
    for _ in 0..halvings {
        sum = sum.mul(&sum, wp);
    }
    sum.mul_pow2(n).round(prec)
}

/// ln x for x > 0.
pub fn ln(x: &BigFloat, prec: u64) -> BigFloat {
    assert!(x.signum() > 0, "ln of a non-positive value");
    let wp = prec + 24;
    let b = x.m.bits() as i64;
    // x = f · 2^n with f = m · 2^{−b} ∈ [1/2, 1).
    let mut f = BigFloat { m: x.m.clone(), e: -b };
    let mut n = x.e + b;
    let threshold = BigFloat::from_f64(std::f64::consts::FRAC_1_SQRT_2);
    if f.cmp_value(&threshold) == Ordering::Less {
        f = f.mul_pow2(1);
        n -= 1;
    }
    let one = BigFloat::one();
    let t = f.sub(&one, wp).div(&f.add(&one, wp), wp);
    let t2 = t.mul(&t, wp);
    let mut power = t.clone();
    let mut sum = t.clone();
    let mut k = 1i64;
    loop {
        power = power.mul(&t2, wp);
        if power.is_zero() || power.top() < -(wp as i64) - 4 {
            break;
        }
        sum = sum.add(&power.div_int(2 * k + 1, wp), wp);
        k += 1;
    }
    let nbits = 64 - n.unsigned_abs().leading_zeros() as u64;
    let w2 = wp + nbits;
    sum.mul_pow2(1).add(&ln2(w2).mul_int(n, w2), wp).round(prec)
}

/// x^y = exp(y ln x), x > 0.
pub fn pow(x: &BigFloat, y: &BigFloat, prec: u64) -> BigFloat {
    let wp = prec + 32 + (x.top().unsigned_abs().max(1) as f64).log2() as u64 + y.top().max(0) as u64;
    exp(&y.mul(&ln(x, wp), wp), prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_roundtrip() {
        for x in [1.0, -2.5, 1e-300, 6.02e23, std::f64::consts::PI] {
            assert_eq!(BigFloat::from_f64(x).to_f64(), x);
        }
    }

    #[test]
    fn constants() {
        assert_eq!(pi(200).to_decimal_string(40), "3.141592653589793238462643383279502884197e0");
        assert_eq!(ln2(200).to_decimal_string(40), "6.931471805599453094172321214581765680755e-1");
        let e = exp(&BigFloat::one(), 200);
        assert_eq!(e.to_decimal_string(40), "2.718281828459045235360287471352662497757e0");
    }

    #[test]
    fn exp_ln_inverse() {
        for x in [0.3, 2.0, 17.5, 1234.5, -40.25] {
            let b = BigFloat::from_f64(x);
            let back = ln(&exp(&b, 300), 300);
            assert!(back.sub(&b, 300).abs().top() < -250 + b.top().max(0), "x={x}");
        }
    }

    #[test]
    fn sqrt_two() {
        let s = BigFloat::from_int(2).sqrt(200);
        assert_eq!(s.to_decimal_string(30), "1.41421356237309504880168872421e0");
    }

    #[test]
    fn decimal_roundtrip() {
        for s in ["2.5e0", "-1.25e-3", "9.99999e10", "1.0e-400", "3.14159265358979323846264338327950288e0"] {
            let digits = s.chars().filter(|c| c.is_ascii_digit()).count()
                - s.split('e').nth(1).unwrap().chars().filter(|c| c.is_ascii_digit()).count();
            let v = BigFloat::parse_decimal(s, 400).unwrap();
            assert_eq!(v.to_decimal_string(digits), s);
        }
        assert!(BigFloat::parse_decimal("1.2.3", 100).is_err());
        assert!(BigFloat::parse_decimal("abc", 100).is_err());
        assert_eq!(BigFloat::zero().to_decimal_string(3), "0.00e0");
    }
}
