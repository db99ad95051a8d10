//! Spectral-type diagnostics: resolvent boundary values from both sides of
//! the circle, the Poisson-smoothed spectral density, the `U`-smoothness
//! constants and a recurrence indicator. At finite size none of these decides
//! the spectral type; together they show how a truncation approaches it.

mod recurrence;
mod resolvent;
mod smoothness;

pub use recurrence::{return_probability, ReturnProbability, MAX_RETURN_STEPS};
pub use resolvent::{
    boundary_trace, circle_grid, circle_trapezoid, geometric_radii, k_vector, midpoint_angles, poisson_density, translation_model, translation_phases,
    BoundaryTrace, DEFAULT_RADIUS_RATIO,
};
pub use smoothness::{
    default_smoothness_z_grid, dyadic_arcs, relative_spread, usmooth_constants, usmooth_constants_with, SmoothnessReport, C1_GROWTH_LIMIT, MIN_N_MAX,
};
