use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("{module}: domain error: {msg}")]
    Domain { module: &'static str, msg: String },

    /// A request that exceeds a configured resource limit or is malformed.
    #[error("{module}: configuration error: {msg}")]
    Config { module: &'static str, msg: String },

    /// A certified quantity violated an invariant it must satisfy.
    #[error("{module}: internal consistency failure: {msg}")]
    Consistency { module: &'static str, msg: String },

    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("parse error: {0}")]
    Parse(String),

    /// A self-test check failed; the message names it.
    #[error("self-test failed: {0}")]
    Check(String),
}

impl Error {
    pub(crate) fn domain(module: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { module, msg: msg.into() }
    }

    pub(crate) fn config(module: &'static str, msg: impl Into<String>) -> Self {
        Error::Config { module, msg: msg.into() }
    }

    pub(crate) fn consistency(module: &'static str, msg: impl Into<String>) -> Self {
        Error::Consistency { module, msg: msg.into() }
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain { .. } | Error::Config { .. } => 2,
            Error::Consistency { .. } => 3,
            Error::Io(_) | Error::Parse(_) => 4,
            Error::Check(_) => 1,
        }
    }
}
