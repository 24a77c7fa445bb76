use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SfvsError {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("cut terminals must be distinct and non-adjacent ({t1}, {t2})")]
    InfeasibleCut { t1: usize, t2: usize },

    #[error("cotree does not match the instance: {0}")]
    CotreeMismatch(String),

    #[error("{what}: {actual} exceeds the limit of {limit}")]
    Capacity { what: &'static str, limit: usize, actual: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("instance has non-unit weights")]
    NonUnitWeights,

    #[error("generation failed: {0}")]
    Generation(String),
}

pub type Result<T> = std::result::Result<T, SfvsError>;
