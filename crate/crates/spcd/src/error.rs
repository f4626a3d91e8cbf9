use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("mesh mismatch: {0}")]
    MeshMismatch(String),

    /// The assembled matrix violates the M-matrix sign pattern the solver
    /// (and the scheme's theory) relies on.
    #[error("M-matrix violation at interior node ({i},{j}): {detail}")]
    MMatrixViolation { i: usize, j: usize, detail: String },

    #[error("solver failure: relative residual {residual:e} exceeds tolerance {tol:e}")]
    SolverFailure { residual: f64, tol: f64 },

    #[error("diagnostics reported failures")]
    DiagnosticsFailed,

    #[error("singular factorization: {0}")]
    Singular(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
