use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the benchmark library.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's precondition (lengths, kinds, ranges).
    #[error("contract violation: {0}")]
    Contract(String),
    /// An experiment or problem configuration is inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed data in {path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
