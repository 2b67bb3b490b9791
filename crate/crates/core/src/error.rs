use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input (shapes, unknown points, bad files).
    #[error("input error: {0}")]
    Input(String),
    /// A mathematical precondition does not hold for otherwise valid input.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request exceeds a fixed size limit.
    #[error("resource error: {0}")]
    Resource(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}
