use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("grade {grade} out of range 0..={k_max}")]
    GradeOutOfRange { grade: usize, k_max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric positive definite: {0}")]
    NotSpd(String),

    #[error("weight value overflows f64 (log value {0}); use the log-domain accessor")]
    Overflow(f64),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("shift by {m} exceeds available grades (k_max = {k_max})")]
    ShiftTooLarge { m: usize, k_max: usize },

    #[error("quadrature needs at least {required} nodes, got {got}")]
    InsufficientNodes { required: usize, got: usize },

    #[error("operator is not symmetric (relative defect {0:e})")]
    NotSymmetric(f64),

    #[error("resolvent point {re}{im:+}i lies on the spectrum (distance {distance:e})")]
    ResolventOnSpectrum { re: f64, im: f64, distance: f64 },

    #[error("map is singular")]
    SingularMap,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
