use std::path::PathBuf;

use thiserror::Error;

use crate::segment::wav::WavError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A line of an input file did not match the expected format.
    #[error("{path}:{line}: expected {expected}")]
    Format {
        path: String,
        line: usize,
        expected: String,
    },

    #[error("invalid token {0:?}: tokens must be non-empty and free of whitespace")]
    InvalidToken(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid segment: {0}")]
    Segment(String),

    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Wav(#[from] WavError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn format(
        path: impl Into<String>,
        line: usize,
        expected: impl Into<String>,
    ) -> Self {
        Error::Format {
            path: path.into(),
            line,
            expected: expected.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
