//! Error type shared by every module in the crate.

/// Crate-wide error type.
///
/// Iterations must never propagate NaN/Inf silently, so any operation that
/// would produce a non-finite value fails with [`Error::NonFinite`] instead.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error("rejected configuration: {0}")]
    RejectedConfig(String),

    #[error("infeasible half-space: zero normal with negative offset")]
    InfeasibleHalfSpace,

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(context: &'static str, expected: usize, actual: usize) -> Self {
        Error::DimensionMismatch {
            context,
            expected,
            actual,
        }
    }
}
