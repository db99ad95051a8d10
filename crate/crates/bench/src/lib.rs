//! Inputs shared by the kernel benchmarks.

use std::f64::consts::PI;

use floquet_core::lattice::{FunctionDesc, GridBasis, InteriorWeight};
use floquet_core::propagator::{FieldSpec, FloquetScenario, DEFAULT_DYSON_ORDER, DEFAULT_TIME_STEPS};
use floquet_core::ComplexMatrix;

/// Resonant `E = sin t` drive with a small Gaussian potential on `n` points.
pub fn perturbed_scenario(n: usize) -> FloquetScenario {
    let basis = GridBasis::new(n, 12.0, 1.0).expect("power-of-two grid");
    let field = FieldSpec::new(FunctionDesc::Sin { a: 1.0, b: 1.0 }, 2.0 * PI).expect("periodic drive");
    FloquetScenario::new(basis, field, Some(FunctionDesc::Gaussian { a: 0.1, s: 1.0 }), DEFAULT_TIME_STEPS, DEFAULT_DYSON_ORDER).expect("valid scenario")
}

pub fn free_scenario(n: usize) -> FloquetScenario {
    perturbed_scenario(n).with_potential(None)
}

pub fn oscillator_frame(s: &FloquetScenario) -> ComplexMatrix {
    InteriorWeight::oscillator(&s.basis).frame().expect("window frame")
}
