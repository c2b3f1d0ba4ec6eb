use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: duplicate id `{id}` (first seen on line {first_line})")]
    DuplicateId {
        id: String,
        line: usize,
        first_line: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cannot build index: {0}")]
    Build(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid index state: {0}")]
    State(String),

    #[error("index file version {found} is not supported (expected {expected})")]
    Version { found: u32, expected: u32 },

    #[error("corrupt index file: {0}")]
    Corrupt(String),

    #[error("tokenizer mode mismatch: index was built with {index}, query uses {query}")]
    ModeMismatch { index: String, query: String },

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
