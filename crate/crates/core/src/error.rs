use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaError {
    #[error("invalid profile dimension: {0}")]
    Dimension(String),
    #[error("rank {rank} out of range 1..={max}")]
    Rank { rank: usize, max: usize },
    #[error("profile value error: {0}")]
    Value(String),
    #[error("student {student} does not find project {project} acceptable")]
    NotAcceptable { student: usize, project: usize },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error("invalid flow: {0}")]
    InvalidFlow(String),
    #[error("augmentation rejected: {0}")]
    Augmentation(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("oracle budget exceeded: {0}")]
    OracleBudget(String),
    #[error("generator config error: {0}")]
    Config(String),
    #[error("internal invariant failure: {0}")]
    Invariant(String),
    #[error("bench failure (seed {seed}): {message}")]
    Bench { seed: u64, message: String },
}

pub type Result<T> = std::result::Result<T, SpaError>;
