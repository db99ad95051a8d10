//! Dense complex linear algebra: Hermitian and unitary eigenproblems,
//! exponentials, norms, and linear solves.

mod eigen;
mod expm;
mod jacobi;
mod matrix;
mod norms;
pub mod random;
mod solve;
mod tridiag;

pub use eigen::{
    circular_clusters, expm_skew, herm_eig, herm_eig_jacobi, unitary_eig, SpectralDecomposition, DEFAULT_CLUSTER_TOL, EIG_DIM_CAP, JACOBI_MAX_DIM,
};
pub use expm::{expm, norm1};
pub use matrix::{dot, norm, ComplexMatrix, C64};
pub use norms::{op_norm, singular_values, vec_distance, weighted_op_norm};
pub use solve::{inverse, solve, LuFactor, ShiftedSolver};
pub use tridiag::{tridiagonal_eigensystem, tridiagonal_eigenvalues};
