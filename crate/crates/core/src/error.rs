use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed record: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: schema error: {message}")]
    Schema { line: usize, message: String },

    #[error("duplicate {what} {key:?}")]
    DuplicateKey { what: &'static str, key: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("training aborted: {0}")]
    Training(String),

    #[error("comment {id}: {source}")]
    Comment {
        id: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }

    pub(crate) fn degenerate(message: impl Into<String>) -> Self {
        Error::Degenerate(message.into())
    }
}
