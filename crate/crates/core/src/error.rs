use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("enumeration budget of {budget} nodes exceeded ({detail})")]
    BudgetExceeded { budget: u64, detail: String },
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("divergent integral: {0}")]
    Divergence(String),
    #[error("solver failure: {0}")]
    SolverFailure(String),
    #[error("step size underflow: {0}")]
    Stiffness(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors raised by numerical procedures rather than by bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Divergence(_) | Error::SolverFailure(_) | Error::Stiffness(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
