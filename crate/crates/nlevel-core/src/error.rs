use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("invalid test function: {0}")]
    InvalidTestFunction(String),
    #[error("support budget violated: total support {total} ≥ 4")]
    SupportBudget { total: f64 },
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("zero search failed: {0}")]
    ZeroSearch(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("config error: {0}")]
    Config(String),
}
