use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, ComplexMatrix, C64};

pub const MAX_RETURN_STEPS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReturnProbability {
    /// `a_n = |⟨ψ, Uⁿψ⟩|²` for `n = 0, …, M−1`.
    pub sequence: Vec<f64>,
    /// `(1/M) Σ a_n`; tends to the sum of squared point masses of `ψ`.
    pub cesaro: f64,
}

/// Wiener-type recurrence indicator by repeated application of `U`.
pub fn return_probability(u: &ComplexMatrix, psi: &[C64], m: usize) -> Result<ReturnProbability> {
    if m == 0 || m > MAX_RETURN_STEPS {
        return Err(Error::InvalidArgument(format!("M must lie in 1..={MAX_RETURN_STEPS}, got {m}")));
    }
    if !u.is_square() || psi.len() != u.rows() {
        return Err(Error::DimensionMismatch("ψ must match U".into()));
    }
    let n2 = dot(psi, psi).re;
    let mut cur = psi.to_vec();
    let mut sequence = Vec::with_capacity(m);
    for _ in 0..m {
        sequence.push(dot(psi, &cur).norm_sqr() / (n2 * n2));
        cur = u.mul_vec(&cur);
    }
    let cesaro = sequence.iter().sum::<f64>() / m as f64;
    Ok(ReturnProbability { sequence, cesaro })
}
