use thiserror::Error;

#[derive(Debug, Error)]
pub enum MarketError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("minimum gap is undefined for a market with a single arm")]
    GapUndefined,

    #[error("enumeration cap exceeded: min(N, K) = {size} > cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("confidence bound requested with zero samples")]
    NoSamples,

    #[error("pair (agent {agent}, arm {arm}) has never been sampled")]
    IncompleteEstimate { agent: usize, arm: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("results schema mismatch: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, MarketError>;
