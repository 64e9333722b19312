use thiserror::Error;

/// Errors produced by the simulation and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} needs {requested} qubits, the cap is {cap}")]
    ResourceLimit {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("basis minimization is enumerated only up to {max} qubits (got {k})")]
    UnsupportedSize { k: usize, max: usize },

    #[error("non-generic code: syndrome map kernel has dimension {kernel_dim}, expected {expected}")]
    NonGenericCode { kernel_dim: usize, expected: usize },

    #[error("empirical counts have no overlap with the ideal support")]
    EmptySupport,

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("jackknife refit without point {index} failed: {source}")]
    JackknifeRefit {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("commutant enumeration produced {0} elements instead of 30")]
    CommutantCount(usize),

    #[error("seed mismatch: {0}")]
    SeedMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
