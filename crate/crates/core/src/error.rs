use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("constraint has rational root {0}")]
    RationalRoot(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("dimension check failed: {0}")]
    Dimension(String),
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Whether the error stems from malformed input (as opposed to a failed
    /// check on well-formed input).
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Invalid(_) | Error::Io(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(format!("JSON: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
