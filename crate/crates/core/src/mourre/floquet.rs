//! Mourre reports for a scenario's Floquet operator. For the full circle
//! only the frame is propagated, so no dense `U` is formed.

use super::arc::Arc;
use super::report::{mourre_from_frames, mourre_report, MourreOptions, MourreReport};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::propagator::{perturbed_floquet_with, propagate_frame_to_period, translation_generator, FloquetScenario, FreeSystem, Observable, ScaledObservable};

/// The translation generator of the free period map: `A₂ ∝ x` when
/// `|φ₂(T)| ≥ |φ₁(T)|`, else `A₁ ∝ p`. Only resonant drives have one.
pub fn resonant_generator(scenario: &FloquetScenario) -> Result<ScaledObservable> {
    if !scenario.is_resonant() {
        return Err(Error::InvalidArgument("a translation generator needs a resonant drive".into()));
    }
    let ph = scenario.phases_at_period()?;
    let which = if ph.phi2.abs() >= ph.phi1.abs() { Observable::X } else { Observable::P };
    translation_generator(&ph, scenario.omega(), which)
}

fn has_potential(s: &FloquetScenario) -> bool {
    s.potential.as_ref().is_some_and(|v| !v.is_zero())
}

/// Dense `U = U₀(T)Ω(T)`; `U₀(T)` when there is no potential.
pub fn floquet_operator_with(fs: &FreeSystem, scenario: &FloquetScenario) -> Result<ComplexMatrix> {
    if has_potential(scenario) {
        Ok(perturbed_floquet_with(fs, scenario)?.0)
    } else {
        Ok(fs.propagator(&scenario.phases_at_period()?))
    }
}

pub fn floquet_operator(scenario: &FloquetScenario) -> Result<ComplexMatrix> {
    floquet_operator_with(&FreeSystem::new(&scenario.basis)?, scenario)
}

/// `U W` for an `N × r` frame.
pub fn floquet_apply_frame(fs: &FreeSystem, scenario: &FloquetScenario, frame: &ComplexMatrix) -> Result<ComplexMatrix> {
    if has_potential(scenario) {
        propagate_frame_to_period(fs, scenario, frame)
    } else {
        Ok(fs.apply_propagator(&scenario.phases_at_period()?, frame))
    }
}

/// Mourre report of the scenario's Floquet operator against `A` on `arc`,
/// seen through the interior frame.
pub fn floquet_mourre_report(scenario: &FloquetScenario, a: &ComplexMatrix, arc: &Arc, frame: &ComplexMatrix) -> Result<MourreReport> {
    let fs = FreeSystem::new(&scenario.basis)?;
    if arc.full {
        let uw = floquet_apply_frame(&fs, scenario, frame)?;
        return mourre_from_frames(&uw, frame, a, *arc, MourreOptions::default().reference, false);
    }
    let u = floquet_operator_with(&fs, scenario)?;
    mourre_report(&u, a, arc, &MourreOptions::interior(frame.clone()))
}
