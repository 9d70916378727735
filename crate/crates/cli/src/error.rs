use std::path::PathBuf;

use complex_core::GeomError;
use measure::MeasureError;
use pushout::PushoutError;
use thiserror::Error;

/// Process exit status for usage, I/O and parse failures.
pub const EXIT_USAGE: u8 = 2;
/// Process exit status for inputs that parse but break an invariant.
pub const EXIT_INVALID: u8 = 3;
/// Process exit status for numerical failures during a computation.
pub const EXIT_NUMERIC: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse { .. } => EXIT_USAGE,
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::InvalidInput(_) | GeomError::InvalidId(_) | GeomError::NotInPolytope { .. } => {
                CliError::Invalid(e.to_string())
            }
            GeomError::Precondition(_) | GeomError::Numerical(_) => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        match e {
            MeasureError::Geom(g) => g.into(),
            MeasureError::InvalidInput(_) => CliError::Invalid(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<PushoutError> for CliError {
    fn from(e: PushoutError) -> Self {
        match e {
            PushoutError::Geom(g) => g.into(),
            PushoutError::Measure(m) => m.into(),
            PushoutError::InvalidInput(_) | PushoutError::InvalidSample { .. } => CliError::Invalid(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
