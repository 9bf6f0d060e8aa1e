use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("divergent series: epsilon = {0} <= 0")]
    DivergentSeries(f64),
    #[error("no convergence after {0} terms")]
    NoConvergence(usize),
    #[error("overflow: log-magnitude {0} exceeds the representable range")]
    Overflow(f64),
    #[error("divergence: {0}")]
    Divergence(String),
    #[error("singular transform: {0}")]
    SingularTransform(String),
    #[error("grid error: {0}")]
    Grid(String),
    #[error("length error: {0}")]
    Length(String),
    #[error("convergence error: {0}")]
    Convergence(String),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DivergentSeries(_)
                | Error::NoConvergence(_)
                | Error::Overflow(_)
                | Error::Divergence(_)
                | Error::Convergence(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
