//! Positive-commutator diagnostics: arcs and spectral projectors, Mourre
//! constants, Virial residuals, eigenvalue counts, the hypotheses of the
//! absence-of-point-spectrum theorem and the regularised resolvent family.

mod arc;
mod floquet;
mod regularized;
mod report;
mod theorem_a;

pub use arc::{angle_distance, wrap_angle, Arc};
pub use floquet::{floquet_apply_frame, floquet_mourre_report, floquet_operator, floquet_operator_with, resonant_generator};
pub use regularized::{default_epsilon_grid, default_z_grid, regularized_family, strict_c_eps, strict_resolvent_norm, RegularizedFamilyReport, SingularPoint};
pub use report::{
    arc_indices, arc_range_basis, cluster_interior_weight, eigen_count, mourre_from_frames, mourre_report, mourre_report_with, spectral_projector,
    virial_residual, virial_residuals, ArcProjector, EigenCount, MourreOptions, MourreReport, VirialResidual, VIRIAL_EIGEN_TOL,
};
pub use theorem_a::{theorem_a_criteria, C11Hypothesis, TheoremACriteria};
