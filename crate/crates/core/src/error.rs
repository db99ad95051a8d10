use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (defect {0:.3e})")]
    NotUnitary(f64),
    #[error("no convergence in {0}")]
    NoConvergence(String),
    #[error("cluster tolerance {cluster_tol:.3e} is below 10x the eigen residual {residual_tol:.3e}")]
    DegenerateClustering { cluster_tol: f64, residual_tol: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular matrix in {0}")]
    Singular(String),
    #[error("bad grid: {0}")]
    BadGrid(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("scenario has no potential")]
    NoPotential,
    #[error("not converged: {0}")]
    NotConverged(String),
    #[error("arc contains no eigenphases")]
    EmptyArc,
    #[error("cluster {0} is not an eigenvalue cluster")]
    NotAnEigenvalue(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Errors caused by bad inputs rather than by a failed computation.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::BadGrid(_) | Error::InvalidArgument(_) | Error::NoPotential | Error::DimensionMismatch(_))
    }
}
