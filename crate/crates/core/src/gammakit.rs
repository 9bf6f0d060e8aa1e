//! Log-gamma, digamma and gamma-ratio kernels on the positive real axis.

// Coefficient tables keep every digit they were published with.
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::inequalities::{InequalityReport, Tolerance, ZSpec};
use crate::scalar::Scalar;

/// Argument of Γ or ψ, validated positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaArg<T>(T);

impl<T: Scalar> GammaArg<T> {
    pub fn new(x: T) -> Result<Self> {
        if x > T::zero() && x.is_finite() {
            Ok(GammaArg(x))
        } else {
            Err(Error::Domain(format!("gamma argument must be positive, got {x}")))
        }
    }

    pub fn get(self) -> T {
        self.0
    }
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_8;

/// ζ(k) − 1 for k = 2, …, 60.
#[rustfmt::skip]
const ZETA_MINUS_ONE: [f64; 59] = [
    6.4493406684822643647e-1, 2.020569031595942854e-1, 8.2323233711138191516e-2,
    3.6927755143369926331e-2, 1.7343061984449139715e-2, 8.3492773819228268398e-3,
    4.0773561979443393787e-3, 2.0083928260822144179e-3, 9.9457512781808533715e-4,
    4.941886041194645587e-4, 2.4608655330804829864e-4, 1.2271334757848914675e-4,
    6.1248135058704829259e-5, 3.0588236307020493552e-5, 1.5282259408651871733e-5,
    7.6371976378997622736e-6, 3.8172932649998398565e-6, 1.9082127165539389257e-6,
    9.5396203387279611315e-7, 4.7693298678780646312e-7, 2.3845050272773299e-7,
    1.1921992596531107307e-7, 5.9608189051259479612e-8, 2.9803503514652280186e-8,
    1.4901554828365041235e-8, 7.450711789835429492e-9, 3.7253340247884570548e-9,
    1.8626597235130490064e-9, 9.3132743241966818287e-10, 4.656629065033784073e-10,
    2.328311833676505492e-10, 1.1641550172700519776e-10, 5.8207720879027008892e-11,
    2.9103850444970996869e-11, 1.4551921891041984236e-11, 7.2759598350574810145e-12,
    3.6379795473786511902e-12, 1.8189896503070659476e-12, 9.0949478402638892825e-13,
    4.5474737830421540268e-13, 2.2737368458246525152e-13, 1.1368684076802278493e-13,
    5.6843419876275856093e-14, 2.8421709768893018555e-14, 1.421085482803160677e-14,
    7.1054273952108527129e-15, 3.5527136913371136733e-15, 1.7763568435791203275e-15,
    8.8817842109308159031e-16, 4.4408921031438133642e-16, 2.220446050798041984e-16,
    1.1102230251410661337e-16, 5.5511151248454812437e-17, 2.7755575621361241726e-17,
    1.3877787809725232763e-17, 6.9388939045441536974e-18, 3.4694469521659226247e-18,
    1.734723476047576572e-18, 8.6736173801199337283e-19,
];

/// B_{2k} / (2k(2k−1)), k = 1, …, 10.
pub(crate) const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// B_{2k} / (2k), k = 1, …, 10.
const DIGAMMA_ASYMPTOTIC: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
    43_867.0 / 14_364.0,
    -174_611.0 / 6600.0,
];

const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

fn check_positive<T: Scalar>(x: T) -> Result<()> {
    GammaArg::new(x).map(|_| ())
}

/// ln Γ(1 + e) for |e| ≤ 1/2, Taylor series in e.
fn ln_gamma_near_one<T: Scalar>(e: T) -> T {
    let mut acc = T::zero();
    for k in (2..=ZETA_MINUS_ONE.len() + 1).rev() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * (1.0 + ZETA_MINUS_ONE[k - 2]) / k as f64;
        acc = acc * e + T::c(c);
    }
    e * (acc * e - T::c(EULER_GAMMA))
}

/// ln Γ(2 + e) for −1/2 ≤ e < 1, Taylor series in e.
fn ln_gamma_near_two<T: Scalar>(e: T) -> T {
    let mut acc = T::zero();
    for k in (2..=ZETA_MINUS_ONE.len() + 1).rev() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * ZETA_MINUS_ONE[k - 2] / k as f64;
        acc = acc * e + T::c(c);
    }
    e * (acc * e + T::c(1.0 - EULER_GAMMA))
}

fn ln_gamma_stirling<T: Scalar>(x: T) -> T {
    let inv = x.recip();
    let inv2 = inv * inv;
    let mut series = T::zero();
    for &c in STIRLING.iter().rev() {
        series = series * inv2 + T::c(c);
    }
    (x - T::c(0.5)) * x.ln() - x + T::c(HALF_LN_2PI) + series * inv
}

/// ln Γ(x) for x > 0.
pub fn log_gamma<T: Scalar>(x: T) -> Result<T> {
    check_positive(x)?;
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked<T: Scalar>(x: T) -> T {
    let one = T::one();
    let two = T::c(2.0);
    if x < T::c(0.5) {
        ln_gamma_near_one(x) - x.ln()
    } else if x < T::c(1.5) {
        ln_gamma_near_one(x - one)
    } else if x < T::c(3.0) {
        ln_gamma_near_two(x - two)
    } else if x < T::c(ASYMPTOTIC_THRESHOLD) {
        let shifts = (x - two).floor();
        let y = x - shifts;
        let mut prod = one;
        let mut t = y;
        while t < x {
            prod = prod * t;
            t = t + one;
        }
        ln_gamma_near_two(y - two) + prod.ln()
    } else {
        ln_gamma_stirling(x)
    }
}

/// ψ(x) = Γ′(x)/Γ(x) for x > 0.
pub fn digamma<T: Scalar>(x: T) -> Result<T> {
    check_positive(x)?;
    Ok(digamma_unchecked(x))
}

pub(crate) fn digamma_unchecked<T: Scalar>(x: T) -> T {
    let threshold = T::c(ASYMPTOTIC_THRESHOLD);
    let mut shift = T::zero();
    let mut y = x;
    while y < threshold {
        shift = shift + y.recip();
        y = y + T::one();
    }
    let inv2 = (y * y).recip();
    let mut series = T::zero();
    for &c in DIGAMMA_ASYMPTOTIC.iter().rev() {
        series = series * inv2 + T::c(c);
    }
    y.ln() - T::c(0.5) / y - series * inv2 - shift
}

/// Γ(z + a) / Γ(z) via the log-gamma difference.
pub fn gamma_ratio<T: Scalar>(z: T, a: T) -> Result<T> {
    check_positive(z)?;
    if !(a >= T::zero()) || !a.is_finite() {
        return Err(Error::Domain(format!("gamma_ratio shift must be >= 0, got {a}")));
    }
    Ok((log_gamma_unchecked(z + a) - log_gamma_unchecked(z)).exp())
}

/// Checks Γ(z+a+b)/Γ(z+b) ≥ Γ(z+a)/Γ(z); with a = b this is Γ(z)Γ(z+2a) ≥ Γ²(z+a).
pub fn gamma_inequality_check(z: f64, a: f64, b: f64, tol: &Tolerance) -> Result<InequalityReport> {
    if !(b >= 0.0) || !b.is_finite() {
        return Err(Error::Domain(format!("gamma_inequality_check needs b >= 0, got {b}")));
    }
    let lhs = gamma_ratio(z + b, a)?;
    let rhs = gamma_ratio(z, a)?;
    let err = 8.0 * f64::EPSILON * (lhs.abs() + rhs.abs()) * (1.0 + log_gamma_unchecked(z + a + b).abs());
    Ok(InequalityReport::new(
        "gamma-ratio",
        serde_json::json!({ "a": a, "b": b }),
        ZSpec::Point(z),
        lhs,
        rhs,
        err,
        tol,
    ))
}
