use thiserror::Error;

/// Errors produced by the geometry, function calculus and valuation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {0} is not supported by this operation")]
    DimensionUnsupported(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("empty input")]
    EmptyInput,
    #[error("pointwise maximum has empty domain")]
    EmptyDomain,
    #[error("negative epi-scale factor {0}")]
    NegativeScale(f64),
    #[error("point lies outside the domain")]
    OutsideDomain,
    #[error("window must be bounded")]
    UnboundedWindow,
    #[error("test function vanishes at the requested point")]
    ZeroWeight,
    #[error("support of the weight exceeds the grid")]
    SupportExceedsGrid,
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("rank deficient fit: {0}")]
    RankDeficient(String),
    #[error("retry budget exhausted: {0}")]
    RetryExhausted(String),
    #[error("degree bound {0} too large for the requested node scheme")]
    DegreeTooLarge(usize),
    #[error("function is not convex: {0}")]
    NotConvex(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("oracle failure: {0}")]
    OracleFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}
