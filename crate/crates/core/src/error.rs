use thiserror::Error;

use crate::pattern::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("distance set {dset:?} is disconnected (gcd {gcd})")]
    Disconnected { dset: Vec<u64>, gcd: u64 },

    #[error("search window of {size} vertices exceeds the cap of {cap}")]
    WindowTooLarge { size: u64, cap: u64 },

    #[error("value {0} is not an integer")]
    NotIntegral(String),

    #[error("no formula applies: {0}")]
    NotApplicable(String),

    #[error("built-in pattern rejected by verifier: {0}")]
    PatternRejected(Violation),

    #[error("internal conflict: {0}")]
    Conflict(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
