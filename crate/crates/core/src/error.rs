use thiserror::Error;

/// Errors raised by the linear-algebra layer and everything built on it.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("malformed state: {0}")]
    MalformedState(String),

    #[error("not a state: {0}")]
    NotAState(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("basis is not orthonormal (deviation {0:e})")]
    NonOrthonormalBasis(f64),

    #[error("negative probability {0}")]
    NegativeProbability(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operation requires a pure state")]
    MixedStateUnsupported,

    #[error("operator annihilates the input (output norm {0:e})")]
    ZeroOutput(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("LOCC violation: {0}")]
    LoccViolation(String),

    #[error("implementation family has no admissible member")]
    EmptyFamily,
}

pub type Result<T> = std::result::Result<T, Error>;
