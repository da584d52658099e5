use thiserror::Error;

/// Errors raised by the exact engine and its numeric companions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("polynomial mixes grades {0} and {1}")]
    MixedGrade(i64, i64),

    #[error("grade mismatch: expected {expected}, got {actual}")]
    GradeMismatch { expected: i64, actual: i64 },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("not a group element: {0}")]
    NotInGroup(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, actual })
    }
}
