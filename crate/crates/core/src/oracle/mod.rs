//! Independent arbitrary-precision reference evaluator and sequence-ratio utilities.

pub mod bigfloat;
pub mod gamma;
mod hp;
mod lemmas;

pub use hp::{hp_eval, hp_eval_section, hp_hypergeometric, hp_log_gamma, working_bits, HpSum, MAX_TERMS};
pub use lemmas::{
    classify, finite_difference, seq_ratio_monotone, series_ratio_monotone_check, Monotonicity,
    RatioMonotonicity,
};
