//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{path}:{line}: {reason}")]
    MalformedRow {
        path: String,
        line: u64,
        reason: String,
    },

    #[error("invalid data: {0}")]
    Data(String),

    #[error("no documents in {0}")]
    EmptyDataset(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("feature width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("model fingerprint mismatch: model was built with {model}, current configuration is {current}")]
    FingerprintMismatch { model: String, current: String },

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("github: repository {owner}/{name} not found")]
    RepoNotFound { owner: String, name: String },

    #[error("github: authentication failed (check HCI_GITHUB_TOKEN)")]
    Unauthorized,

    #[error("github: rate limit exhausted after {retries} retries")]
    RateLimited { retries: u32 },

    #[error("http error: {0}")]
    Http(String),
}

impl Error {
    /// Process exit code for CLI reporting: 2 for data problems the user can
    /// fix in their input files, 3 for runtime/IO failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::MalformedRow { .. }
            | Error::Data(_)
            | Error::EmptyDataset(_)
            | Error::Config(_)
            | Error::WidthMismatch { .. }
            | Error::FingerprintMismatch { .. }
            | Error::Json(_) => 2,
            Error::Io(_)
            | Error::RepoNotFound { .. }
            | Error::Unauthorized
            | Error::RateLimited { .. }
            | Error::Http(_) => 3,
        }
    }
}
