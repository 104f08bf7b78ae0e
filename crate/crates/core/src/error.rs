use thiserror::Error;

/// Errors raised by field, series and front-end operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The caller combined incompatible objects or passed an invalid argument.
    #[error("usage error: {0}")]
    Usage(String),
    /// The operation is mathematically undefined for its input (e.g. inverting zero).
    #[error("domain error: {0}")]
    Domain(String),
    /// The expression text could not be parsed.
    #[error("syntax error at byte {offset}: {message} (expected {expected})")]
    Syntax {
        offset: usize,
        message: String,
        expected: String,
    },
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
