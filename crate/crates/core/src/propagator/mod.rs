//! Free AC-Stark propagator in closed form and the perturbed one-period
//! propagator, by interaction-picture stepping and by Dyson series.

mod dyson;
mod free;
mod perturbed;
mod phases;
mod quadrature;
mod scenario;

pub use dyson::{dyson_remainder_bound, dyson_series, DysonSeries};
pub use free::{
    exact_commutator_residual, free_propagator, heisenberg_check, heisenberg_residual, translation_generator, FreeSystem, HeisenbergResidual, Observable,
    ScaledObservable,
};
pub use perturbed::{
    perturbed_floquet, perturbed_floquet_reference, perturbed_floquet_with, propagate_frame, propagate_frame_adjoint, propagate_frame_to_period, Stepper,
};
pub use phases::{phase_functions, phase_table, FieldSpec, PhaseTriple, DEFAULT_PHASE_TOL};
pub use quadrature::{adaptive_simpson, cumulative_simpson_weights, simpson_weights};
pub use scenario::{FloquetScenario, DEFAULT_DYSON_ORDER, DEFAULT_TIME_STEPS, MIN_TIME_STEPS};
