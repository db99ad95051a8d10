//! Numerical laboratory for positive-commutator (Mourre) estimates of unitary
//! operators, built around the Floquet operator of a harmonic oscillator under
//! a resonant AC-Stark drive with a bounded perturbation.
//!
//! Everything works on finite truncations: a periodic position grid carries
//! `x`, `p` and `H_ω`, propagators are dense unitary matrices, and the
//! unbounded observables are measured through an interior window that filters
//! out boundary artifacts.

// `!(x > 0.0)` is the idiom here for rejecting NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commutator;
pub mod diagnostics;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod mourre;
pub mod propagator;
pub mod scenarios;

pub use error::{Error, Result};
pub use lattice::{FunctionDesc, GridBasis, InteriorWeight};
pub use linalg::{ComplexMatrix, SpectralDecomposition, C64};
pub use mourre::{Arc, MourreReport, RegularizedFamilyReport};
pub use propagator::{FieldSpec, FloquetScenario, PhaseTriple};
pub use scenarios::NamedScenario;
