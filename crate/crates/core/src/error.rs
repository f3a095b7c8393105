use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
    #[error("too few observations: n = {n} needs to exceed p + 1 = {}", p + 1)]
    TooFewObservations { n: usize, p: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("duplicate predictor name `{0}`")]
    DuplicateName(String),
    #[error("predictor index {index} outside 1..={p}")]
    InvalidMask { index: usize, p: usize },
    #[error("selected columns are collinear (rank deficient)")]
    RankDeficient,
    #[error("full model fits the response exactly; likelihood-ratio statistics are undefined")]
    DegenerateFit,
    #[error("predictor column {0} has zero variance")]
    ConstantColumn(usize),
    #[error("argument out of domain: {0}")]
    Domain(&'static str),
    #[error("exhaustive search over p = {p} predictors exceeds the limit of {limit}")]
    LimitExceeded { p: usize, limit: usize },
    #[error("no candidate model satisfies the constraint")]
    Infeasible,
    #[error("invalid scenario: {0}")]
    InvalidScenario(&'static str),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(&'static str),
    #[error("design regeneration gave up after {0} attempts")]
    RetriesExhausted(usize),
}
