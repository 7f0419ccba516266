use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("denominator {0} is not invertible mod {1}")]
    NonInvertibleDenominator(String, u64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a Rota-Baxter operator: {0}")]
    NotRotaBaxter(String),
    #[error("not a dendriform algebra: {0}")]
    NotDendriform(String),
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error("invalid bimodule: {0}")]
    InvalidBimodule(String),
    #[error("map is not a section of pi: {0}")]
    NotASection(String),
    #[error("projection is not surjective: {0}")]
    NotSurjective(String),
    #[error("computed value lies outside the image of i: {0}")]
    ValueOutsideB(String),
    #[error("coefficient algebra has a nonzero product: {0}")]
    NotAbelian(String),
    #[error("induced bimodule differs from the supplied one")]
    BimoduleMismatch,
    #[error("search budget exceeded: {0} candidates requested, budget {1}")]
    BudgetExceeded(u128, u64),
    #[error("operation unsupported over this field: {0}")]
    UnsupportedField(String),
    #[error("automorphism does not preserve the B block")]
    NotBlockPreserving,
    #[error("cohomology degree {0} unsupported (max 3)")]
    DegreeUnsupported(usize),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
