use thiserror::Error;

/// Errors surfaced by game construction, traversal and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A precondition of an operation was not met by its input.
    #[error("contract violation: {0}")]
    Contract(String),
    /// The operation exists but is not defined for this game or configuration.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A game specification string could not be parsed.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    /// A game specification parsed but describes an infeasible game.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}
