use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("instance too large: n = {n} exceeds oracle limit {max_n}")]
    TooLarge { n: usize, max_n: usize },
    #[error("unknown mode '{0}'")]
    UnknownMode(String),
    #[error("lambda {0} is outside the cycle-time set")]
    InfeasibleLambda(String),
    #[error("inconsistent parallel places between '{from}' and '{to}': lower bound {lo} exceeds upper bound {hi}")]
    InconsistentParallelPlaces {
        from: String,
        to: String,
        lo: String,
        hi: String,
    },
    #[error("missing prefix of length {0} in trajectory")]
    MissingPrefix(usize),
    #[error("unsupported format '{0}'")]
    UnsupportedFormat(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
