use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("malformed input at {path}: {msg}")]
    Malformed { path: String, msg: String },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("not an embedding: {0}")]
    NotEmbedding(String),

    #[error("structure is not a member of class {class}: {msg}")]
    NotMember { class: String, msg: String },

    #[error("query holds trivially: {0}")]
    TriviallyHolds(String),

    #[error("empty embedding set: {0}")]
    EmptyDomain(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("search space too large: {0}")]
    SearchTooLarge(String),

    #[error("solver integration error: {0}")]
    SolverIntegration(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn malformed(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Malformed {
            path: path.into(),
            msg: msg.into(),
        }
    }
}
