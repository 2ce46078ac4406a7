use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole at s = {0}")]
    Pole(String),

    #[error("insufficient depth: {what}; raise the truncation depth (currently {depth})")]
    InsufficientDepth { what: String, depth: usize },

    #[error("exponent ladders not aligned: {0} and {1} differ by a non-integer")]
    LadderMisalignment(String, String),

    #[error("operator is not elliptic: {0}")]
    NotElliptic(String),

    #[error("result leaves the representable coefficient family: {0}")]
    Representation(String),

    #[error("truncation too shallow: {0}")]
    TruncationTooShallow(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown check id {id:?}; valid ids: {valid}")]
    UnknownCheck { id: String, valid: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
