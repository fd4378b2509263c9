use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exact computation needed the square root of a non-square rational.
    #[error("irrational value in exact arithmetic: {0}")]
    Irrational(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
