use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("variable context mismatch")]
    ContextMismatch,

    #[error("division by zero")]
    DivisionByZero,

    #[error("denominator evaluates to zero")]
    ZeroDenominator,

    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("degenerate graph: {0}")]
    DegenerateGraph(String),

    #[error("the zero vector has no direction")]
    ZeroVector,

    #[error("invalid norm: {0}")]
    InvalidNorm(String),

    #[error("denominator of a graph coefficient vanishes at {witness:?}")]
    DenominatorVanishes { witness: Vec<f64> },

    #[error("no geodesic vector over y = {y:?} found (residual {residual:e})")]
    Unsolvable { y: Vec<f64>, residual: f64 },

    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),

    #[error("rank-deficient sample set (rank {rank}, need {needed})")]
    RankDeficient { rank: usize, needed: usize },

    #[error("graphs are expressed in different reductive splits")]
    SplitMismatch,

    #[error("solver self-check failed: {0}")]
    SelfCheck(String),

    #[error("{field}: {message}")]
    Parse { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
        if expected == got {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, got })
        }
    }
}
