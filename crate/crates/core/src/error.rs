use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A parameter violates the operation's precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A real argument lies outside the function's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested enumeration exceeds a fixed budget; the work is refused, not truncated.
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    /// Malformed text input (code, chain, witness or vector-set files).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
