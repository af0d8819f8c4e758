use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size {n} exceeds the configured bound {max} (raise it explicitly to go further)")]
    SizeLimitExceeded { n: usize, max: usize },
    #[error("assignment annihilates denominator factor {0}")]
    ZeroDenominator(String),
    #[error("cell ({row},{col}) is not in the diagram")]
    CellOutOfDiagram { row: usize, col: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
