use thiserror::Error;

/// Errors surfaced by engine operations.
///
/// `Internal` marks a broken invariant that the caller cannot cause through
/// well-formed input; everything else is a rejected input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("generator outside the module's positive part: {0}")]
    OutsideDomain(String),

    #[error("operation on the zero vector")]
    ZeroVector,

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn mismatch(msg: impl Into<String>) -> Self {
        Error::AlgebraMismatch(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
