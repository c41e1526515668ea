use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GolombError {
    #[error("invalid ruler: {0}")]
    InvalidRuler(String),
    #[error("no known optimum for {0} marks")]
    MissingOptimum(usize),
    #[error("invalid bounds table: {0}")]
    InvalidBounds(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid report: {0}")]
    InvalidReport(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, GolombError>;
