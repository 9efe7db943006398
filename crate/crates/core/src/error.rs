use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid variety: {0}")]
    InvalidVariety(String),

    #[error("numerator box bound required for indefinite variety {0}")]
    CapRequired(String),

    #[error("enumeration budget of {budget} points exceeded; buckets 0..={completed_k:?} completed")]
    ResourceBound {
        budget: usize,
        /// Last bucket that was fully enumerated, `None` if bucket 0 did not finish.
        completed_k: Option<u32>,
    },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("empty census")]
    EmptyCensus,

    #[error("no census points with height <= {0}")]
    NoPointsUnderCap(u64),

    #[error("fit needs at least 3 points in the window, got {0}")]
    TooFewPoints(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not converge at t = {t} (last change {delta:e} with {nodes} nodes)")]
    QuadratureNonConvergence { t: f64, delta: f64, nodes: usize },

    #[error("unknown example id {0:?}")]
    UnknownExample(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
