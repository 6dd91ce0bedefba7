use std::io;

/// Errors produced by the approximator, the estimators and the search engines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("code point U+{code_point:04X} is outside the direct-address table (bound {bound})")]
    BackingUnsupported { code_point: u32, bound: u32 },

    #[error("shift oracle was built for a different pattern")]
    OracleMismatch,

    #[error("input is not valid UTF-8 (first bad byte at offset {offset})")]
    Decode { offset: usize },

    #[error("engines disagree: {0}")]
    EngineMismatch(String),

    #[error("malformed approximator image: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
