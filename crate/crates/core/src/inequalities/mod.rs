//! Numerical checks of the Turán, Lazarević, Wilker, ratio-monotonicity and
//! log-concavity inequalities, and the grid runner that drives them.

mod approx;
mod checks;
mod grid;
mod report;
mod suites;

pub use approx::{gamma_factor, Approx, Evaluated, Evaluator, FastEvaluator, HpEvaluator};
pub use checks::{check_grid, kn_constant, omega, one_psi_two, BetaForm, Checker, LogConcaveForm, Slot};
pub use report::{InequalityReport, Tolerance, Verdict, ZSpec};
pub use grid::{GridSpec, SampleMode};
pub use suites::{
    explore_instances, run_instances, run_suite, sample, suite, Exploration, Instance, Sample, Suite, Summary, GRID_POINTS,
    SUITES,
};
