use thiserror::Error;

/// Errors surfaced by the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("component `{component}` has a nonzero constant term {value}; the analysis requires F(0) = 0 (pass --translate to shift it away)")]
    NonzeroConstantTerm { component: String, value: String },
    #[error("conj(...) at line {line}, column {col} is only valid in the mixed setting")]
    ConjInNonMixed { line: usize, col: usize },
    #[error("polynomial has no terms")]
    EmptyPolynomial,
    #[error("face point {point:?} is not in the support")]
    PointOutsideSupport { point: Vec<u32> },
    #[error("map is already in the real setting")]
    AlreadyReal,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("problem too large for the exact engine: {what} = {value} exceeds the guard {limit}")]
    DimensionTooLarge { what: &'static str, value: usize, limit: usize },
    #[error("direction vector must be nonzero")]
    ZeroDirection,
    #[error("operation requires the real setting")]
    SettingNotReal,
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("point must not be the origin")]
    OriginPoint,
    #[error("weighted scaling of the point is zero")]
    ZeroScaledPoint,
    #[error("more components than variables: k = {k} > n = {n}")]
    TooManyComponents { k: usize, n: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
