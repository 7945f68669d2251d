use thiserror::Error;

/// Error taxonomy shared by the whole crate.
///
/// `Contract` marks violated preconditions, `Range` marks values leaving the
/// signed-64-bit lattice, `Resource` marks configured size caps, `Numeric`
/// marks iterative procedures that failed to converge. I/O and parse problems
/// keep their own variants so the CLI can map everything else to exit code 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}

pub(crate) fn range(msg: impl Into<String>) -> Error {
    Error::Range(msg.into())
}

pub(crate) fn resource(msg: impl Into<String>) -> Error {
    Error::Resource(msg.into())
}
