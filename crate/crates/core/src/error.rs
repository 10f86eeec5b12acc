use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    Dimension(String),

    #[error("index ({i}, {j}) out of range for a {dim}x{dim} matrix")]
    IndexOutOfRange { i: usize, j: usize, dim: usize },

    #[error("entry vector has length {actual}, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {gap:e}")]
    NotSymmetric { i: usize, j: usize, gap: f64 },

    #[error("eigenvalue iteration did not converge for index {index} after {iterations} sweeps")]
    NoConvergence { index: usize, iterations: usize },

    #[error("sample {sample_index}: {source}")]
    Sample {
        sample_index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("enumeration guard exceeded: {what} needs {cost:e} steps (limit {limit:e})")]
    Guard { what: String, cost: f64, limit: f64 },

    #[error("rank-deficient design matrix at column {column}")]
    RankDeficient { column: usize },

    #[error("need ≥ {needed} rows, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Guard { .. } => 3,
            Error::NoConvergence { .. }
            | Error::RankDeficient { .. }
            | Error::NotSymmetric { .. } => 4,
            Error::Sample { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}
