use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("elements must have at least one coordinate")]
    EmptyElement,

    #[error("undefined sum at coordinate {index}: negative value plus infinity in strict-cone mode")]
    UndefinedSum { index: usize },

    #[error("undefined difference at coordinate {index}: cannot subtract infinity")]
    UndefinedDifference { index: usize },

    #[error("negative scalar applied to an element with an infinite coordinate")]
    NegativeScaleOnInfinite,

    #[error("undefined product at coordinate {index}: negative value times infinity")]
    UndefinedProduct { index: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("index error: {0}")]
    IndexError(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid probability space: {0}")]
    InvalidProbSpace(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("input is not eventually periodic: {0}")]
    NonPeriodicInput(String),

    #[error("no checkpoints given")]
    EmptyCheckpoints,

    #[error("depth {depth} exceeds the maximum of {max}")]
    DepthTooLarge { depth: usize, max: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown lemma `{0}`")]
    UnknownLemma(String),
}
