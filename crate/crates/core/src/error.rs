use std::path::Path;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by resource loading and by the correction pipeline.
///
/// Contract violations (calling an operation outside its stated
/// preconditions, e.g. querying a bigram model with a trigram) panic
/// instead; they indicate bugs in the caller, not recoverable states.
#[derive(Debug, Error)]
pub enum Error {
    /// A file that must be UTF-8 contains an invalid byte sequence.
    #[error("{path}: invalid UTF-8 at byte offset {offset}")]
    Decode { path: String, offset: usize },

    /// A lexicon, model or corpus file failed to parse.
    #[error("{context}: line {line}: {message}")]
    Parse {
        context: String,
        line: usize,
        message: String,
    },

    /// Invalid configuration: unsupported n-gram order, missing resource, ...
    #[error("{0}")]
    Config(String),

    /// Texts under comparison are not token-aligned.
    #[error("line {line}: {message}")]
    Alignment { line: usize, message: String },

    /// A normalization record does not match the document it is applied to.
    #[error("normalization record: {0}")]
    Record(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(
        context: impl Into<String>,
        line: usize,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            context: context.into(),
            line,
            message: message.into(),
        }
    }
}

/// Reads a whole file as UTF-8, reporting the byte offset of the first
/// invalid sequence instead of silently replacing it.
pub fn read_utf8(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)?;
    String::from_utf8(bytes).map_err(|e| Error::Decode {
        path: path.display().to_string(),
        offset: e.utf8_error().valid_up_to(),
    })
}
