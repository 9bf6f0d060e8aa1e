//! Fox–Wright function family: log-space series engine, named reductions
//! (ₚF_q, Mittag-Leffler, Wright, normalized Bessel), a big-float reference
//! evaluator and numerical checkers for the associated inequalities.

// `!(x > 0.0)` guards are deliberate: they reject NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod dd;
pub mod error;
pub mod functions;
pub mod gammakit;
pub mod inequalities;
pub mod oracle;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// f64 instantiations of the generic types.
pub type Params = series::FoxWrightParams<f64>;
pub type Config = series::EvalConfig<f64>;
pub type Evaluation = series::EvalResult<f64>;
