use thiserror::Error;

pub type Result<T> = std::result::Result<T, GeomError>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeomError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unknown simplex id {0}")]
    InvalidId(usize),
    #[error("point {point:?} is not in the polytope (nearest simplex {nearest}, distance {distance:e})")]
    NotInPolytope {
        point: Vec<f64>,
        nearest: usize,
        distance: f64,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}
