use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid block structure: {0}")]
    Structure(String),

    #[error("not a group table: {0}")]
    GroupTable(String),

    #[error("invalid quantum group: {0}")]
    InvalidQuantumGroup(String),

    #[error("no unique Haar state: solution space has dimension {0}")]
    Haar(usize),

    #[error("block decomposition unstable after {retries} attempts: {detail}")]
    Decomposition { retries: usize, detail: String },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
