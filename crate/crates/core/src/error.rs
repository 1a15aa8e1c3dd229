//! Error type shared by the whole crate.

/// Errors distinguish bad caller input from internal consistency failures: the latter mean a
/// cross-check between two independent computations disagreed and the result cannot be trusted.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// The caller passed an argument outside the operation's domain.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// Two independent computations of the same quantity disagreed.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn argument(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
