use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch")]
    GridMismatch,
    #[error("zero function")]
    ZeroFunction,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("h not controlled by F: {0}")]
    NotControlled(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("result too large: {0}")]
    TooLarge(String),
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("no popular triple")]
    NoPopularTriple,
    #[error("pipeline stage `{stage}` failed: {reason}")]
    Pipeline { stage: String, reason: String },
    #[error("format error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
