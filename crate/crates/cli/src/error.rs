use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("instance has no demand points")]
    EmptyInstance,
    #[error("{0}")]
    Config(String),
    /// Work ran but did not all succeed.
    #[error("{0}")]
    Incomplete(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Model(#[from] fmclp_core::Error),
}

impl FormatError {
    pub fn at(line: usize, msg: impl Into<String>) -> Self {
        FormatError::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// Line of a parse error, if any.
    pub fn line(&self) -> Option<usize> {
        match self {
            FormatError::Parse { line, .. } => Some(*line),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, FormatError>;
