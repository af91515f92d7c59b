use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("undefined input: {0}")]
    UndefinedInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("eigensolver did not converge: {0}")]
    NonConvergence(String),

    #[error("bracket failure: {0}")]
    Bracket(String),

    #[error("pole: {0}")]
    Pole(String),
}

pub type Result<T, E = SpectraError> = std::result::Result<T, E>;
