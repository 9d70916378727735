use complex_core::GeomError;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, MeasureError>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MeasureError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error(
        "no admissible apex after {draws} draws ({inadmissible} too close to samples, \
         {over_bound} over the face bound; best worst-face ratio {best_ratio:e})"
    )]
    SelectionFailure {
        draws: usize,
        inadmissible: usize,
        over_bound: usize,
        best_ratio: f64,
    },
}
