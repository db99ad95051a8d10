//! Periodic position grid: `x`, `p`, `H_ω`, multiplication operators and the
//! interior window.

mod fft;
mod function;
mod grid;
mod interior;

pub use fft::{dft_matrix, Fft};
pub use function::FunctionDesc;
pub use grid::{hamiltonian_op, momentum_op, multiplication_op, position_op, sample, GridBasis};
pub use interior::{
    interior_projector, smooth_step, InteriorWeight, DEFAULT_FRACTION, DEFAULT_MOMENTUM_FRACTION, DEFAULT_TAPER, OSCILLATOR_CUT, OSCILLATOR_TAPER,
};
