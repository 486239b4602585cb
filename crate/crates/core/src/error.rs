use thiserror::Error;

/// Errors raised by problem construction, proximal maps and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum VIError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("iterates diverged (non-finite values) at iteration {iteration}")]
    Divergence { iteration: usize },
    #[error("point lies outside the domain of g: {0}")]
    Domain(String),
    #[error("sampling produced no admissible points")]
    Sampling,
}

pub type Result<T> = std::result::Result<T, VIError>;

pub(crate) fn invalid(msg: impl Into<String>) -> VIError {
    VIError::InvalidInput(msg.into())
}
