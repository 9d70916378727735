use complex_core::GeomError;
use measure::MeasureError;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, PushoutError>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PushoutError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("sample {index}: {reason}")]
    InvalidSample { index: usize, reason: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("apex is within {gap:e} of sample point {point:?}")]
    ApexTooClose { point: Vec<f64>, gap: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
