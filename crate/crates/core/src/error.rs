use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("{path}:{line}:{column}: {message}")]
    File {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("group order exceeds cap {cap}")]
    OrderCap { cap: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("lift search failed: no generating tuple found in the coset product")]
    LiftSearchFailed,

    #[error(
        "non-integral solution at index {index}: input is not the probability sequence of a group of order {order}"
    )]
    NonIntegral { index: usize, order: usize },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
