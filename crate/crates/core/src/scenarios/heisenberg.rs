//! Heisenberg couples `(T, A)`: `e^{itA}Te^{−itA} = e^{it}T`, equivalently
//! `T^{−n}AT^n = A + n`. Every check is seen through an interior frame `W`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, op_norm, ComplexMatrix, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergCouple {
    /// `max_t ‖W†(e^{itA}Te^{−itA} − e^{it}T)W‖`.
    pub max_residual: f64,
    pub residuals: Vec<(f64, f64)>,
    /// `(n, ‖W†(T^{−n}AT^n − A − n)W‖)` for `n = 1, 2, 3`.
    pub power_residuals: Vec<(u32, f64)>,
    /// `(k, ‖W†(ad_A^k T − T)W‖)` for `k = 1, 2`; `ad_A T = T` for a couple.
    pub ad_residuals: Vec<(u32, f64)>,
}

/// `e^{−itA}` applied to `W`, diagonal shortcut when `A` is diagonal.
fn conjugating_frames(a: &ComplexMatrix, frame: &ComplexMatrix, t_grid: &[f64]) -> Result<Vec<ComplexMatrix>> {
    let n = a.rows();
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || a[(i, j)] == C64::new(0.0, 0.0)));
    if diagonal {
        let d: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
        return Ok(t_grid.iter().map(|&t| frame.scale_rows(&d.iter().map(|&x| C64::from_polar(1.0, -t * x)).collect::<Vec<_>>())).collect());
    }
    let (vals, vecs) = herm_eig(&a.hermitian_part(), 1e-14)?;
    let vw = vecs.adj_mul(frame);
    Ok(t_grid.iter().map(|&t| vecs.matmul(&vw.scale_rows(&vals.iter().map(|&x| C64::from_polar(1.0, -t * x)).collect::<Vec<_>>()))).collect())
}

pub fn heisenberg_couple_check(t_op: &ComplexMatrix, a: &ComplexMatrix, t_grid: &[f64], frame: &ComplexMatrix) -> Result<HeisenbergCouple> {
    let n = t_op.rows();
    if !t_op.is_square() || a.rows() != n || !a.is_square() || frame.rows() != n {
        return Err(Error::DimensionMismatch("T, A and the frame must share one dimension".into()));
    }
    let defect = t_op.unitary_defect();
    if !(defect <= 1e-8) {
        return Err(Error::NotUnitary(defect));
    }
    let base = frame.adj_mul(&t_op.matmul(frame));
    let mut residuals = Vec::with_capacity(t_grid.len());
    for (&t, y) in t_grid.iter().zip(conjugating_frames(a, frame, t_grid)?) {
        let lhs = y.adj_mul(&t_op.matmul(&y));
        residuals.push((t, op_norm(&lhs.sub(&base.scale(C64::from_polar(1.0, t))))?));
    }
    let max_residual = residuals.iter().map(|r| r.1).fold(0.0, f64::max);

    let a_c = frame.adj_mul(&a.matmul(frame));
    let mut power_residuals = Vec::new();
    let mut tw = frame.clone();
    for k in 1..=3u32 {
        tw = t_op.matmul(&tw);
        let m = tw.adj_mul(&a.matmul(&tw)).sub(&a_c).add_identity(C64::new(-(k as f64), 0.0));
        power_residuals.push((k, op_norm(&m)?));
    }

    let ad1 = a.matmul(t_op).sub(&t_op.matmul(a));
    let ad2 = a.matmul(&ad1).sub(&ad1.matmul(a));
    let mut ad_residuals = Vec::new();
    for (k, ad) in [(1u32, &ad1), (2, &ad2)] {
        ad_residuals.push((k, op_norm(&frame.adj_mul(&ad.sub(t_op).matmul(frame)))?));
    }
    Ok(HeisenbergCouple { max_residual, residuals, power_residuals, ad_residuals })
}

/// The cyclic shift `S e_j = e_{j+1}` and the position index `A = diag(j)`.
pub fn exact_shift_model(n: usize) -> (ComplexMatrix, ComplexMatrix) {
    let s = ComplexMatrix::from_fn(n, n, |i, j| if i == (j + 1) % n { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
    let a = ComplexMatrix::from_real_diag(&(0..n).map(|j| j as f64).collect::<Vec<_>>());
    (s, a)
}

/// Coordinate frame on sites `lo..hi`, away from the wrap of the shift.
pub fn coordinate_frame(n: usize, lo: usize, hi: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, hi - lo, |i, c| if i == lo + c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
}

/// Kolmogorov–Smirnov distance of angles in `(−π, π]` from the uniform law.
pub fn ks_uniform_distance(phases: &[f64]) -> f64 {
    let n = phases.len();
    let mut u: Vec<f64> = phases.iter().map(|&t| (t + std::f64::consts::PI) / (2.0 * std::f64::consts::PI)).collect();
    u.sort_by(|a, b| a.total_cmp(b));
    u.iter().enumerate().map(|(i, &x)| (x - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - x).abs())).fold(0.0, f64::max)
}
