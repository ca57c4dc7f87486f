use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("open-shell unsupported: {0}")]
    OpenShell(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("hamiltonian term {0} does not match the seniority-zero qubit pattern")]
    UnexpectedTerm(String),

    #[error("invalid measurement configuration: {0}")]
    InvalidCombination(String),

    #[error("post-selection retained zero shots in group {group}")]
    ZeroRetention { group: String },

    #[error("basis of dimension {0} exceeds the dense oracle limit")]
    SizeOverflow(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
