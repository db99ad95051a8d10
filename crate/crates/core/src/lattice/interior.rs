//! Phase-space window standing in for the Schwartz-space domain of `x` and
//! `p`. Diagnostics that involve these unbounded operators are measured on its
//! range, away from the periodic seam and the momentum cutoff.

use serde::{Deserialize, Serialize};

use super::grid::GridBasis;
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix, C64};

pub const DEFAULT_FRACTION: f64 = 0.5;
pub const DEFAULT_MOMENTUM_FRACTION: f64 = 0.5;
pub const DEFAULT_TAPER: f64 = 0.3;

/// Window for checks that follow the oscillator flow: the classical rotation
/// by `ωt` must keep the window inside both grid cutoffs, so the position and
/// momentum extents are a few oscillator lengths rather than a fraction of
/// the box.
pub const OSCILLATOR_CUT: f64 = 3.0;
pub const OSCILLATOR_TAPER: f64 = 1.5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteriorWeight {
    pub basis: GridBasis,
    /// Flat-top half-width in position.
    pub x_cut: f64,
    /// Flat-top half-width in momentum.
    pub p_cut: f64,
    /// Relative width of the smooth ramp beyond each cut.
    pub taper: f64,
}

/// Gevrey smooth step: 1 for `u ≤ 0`, 0 for `u ≥ 1`, `C^∞` in between.
pub fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        return 1.0;
    }
    if u >= 1.0 {
        return 0.0;
    }
    let f = |t: f64| (-1.0 / t).exp();
    f(1.0 - u) / (f(1.0 - u) + f(u))
}

fn ramp(a: f64, cut: f64, taper: f64) -> f64 {
    if taper == 0.0 {
        return if a.abs() <= cut { 1.0 } else { 0.0 };
    }
    smooth_step((a.abs() - cut) / (cut * taper))
}

impl InteriorWeight {
    /// Cuts at `fraction·L` and `momentum_fraction·p_max` with the default taper.
    pub fn new(basis: &GridBasis, fraction: f64, momentum_fraction: f64) -> Result<Self> {
        for (name, v) in [("fraction", fraction), ("momentum_fraction", momentum_fraction)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidArgument(format!("{name} must lie in (0, 1], got {v}")));
            }
        }
        Self::from_cutoffs(basis, fraction * basis.half_width, momentum_fraction * basis.p_max(), DEFAULT_TAPER)
    }

    pub fn default_for(basis: &GridBasis) -> Self {
        Self::new(basis, DEFAULT_FRACTION, DEFAULT_MOMENTUM_FRACTION).expect("default fractions are valid")
    }

    pub fn from_cutoffs(basis: &GridBasis, x_cut: f64, p_cut: f64, taper: f64) -> Result<Self> {
        if !(x_cut > 0.0 && p_cut > 0.0 && taper >= 0.0 && taper.is_finite()) {
            return Err(Error::InvalidArgument(format!("window cuts must be positive (x_cut {x_cut}, p_cut {p_cut}, taper {taper})")));
        }
        Ok(Self { basis: basis.clone(), x_cut, p_cut, taper })
    }

    /// A disc of a few oscillator lengths, scaled with `ω`.
    pub fn oscillator(basis: &GridBasis) -> Self {
        let s = basis.omega.sqrt();
        Self::from_cutoffs(basis, OSCILLATOR_CUT / s, OSCILLATOR_CUT * s, OSCILLATOR_TAPER).expect("positive cuts")
    }

    pub fn fraction(&self) -> f64 {
        self.x_cut / self.basis.half_width
    }

    pub fn momentum_fraction(&self) -> f64 {
        self.p_cut / self.basis.p_max()
    }

    /// Diagonal of `Q_x`.
    pub fn position_weights(&self) -> Vec<f64> {
        self.basis.points().iter().map(|&x| ramp(x, self.x_cut, self.taper)).collect()
    }

    /// Diagonal of `Q_p` in FFT order.
    pub fn momentum_weights(&self) -> Vec<f64> {
        self.basis.momenta().iter().map(|&p| ramp(p, self.p_cut, self.taper)).collect()
    }

    /// Orthonormal frame `W` (`N × r`) spanning the range of the projector:
    /// eigenvectors of `Q_x^{1/2} Q_p Q_x^{1/2}` with eigenvalue at least ½.
    /// The eigenproblem is restricted to the support of `Q_x`.
    pub fn frame(&self) -> Result<ComplexMatrix> {
        let n = self.basis.n_points;
        let qx = self.position_weights();
        let qp = self.momentum_weights();
        if qx.iter().all(|&w| w == 1.0) && qp.iter().all(|&w| w == 1.0) {
            return Ok(ComplexMatrix::identity(n));
        }
        let support: Vec<usize> = (0..n).filter(|&k| qx[k] > 0.0).collect();
        if support.is_empty() {
            return Ok(ComplexMatrix::zeros(n, 0));
        }
        let d: Vec<C64> = qp.iter().map(|&w| C64::new(w, 0.0)).collect();
        let qp_mat = self.basis.fft().momentum_diag_matrix(&d);
        let m = support.len();
        let sq: Vec<f64> = support.iter().map(|&k| qx[k].sqrt()).collect();
        let block = ComplexMatrix::from_fn(m, m, |i, j| qp_mat[(support[i], support[j])] * (sq[i] * sq[j])).hermitian_part();
        let (vals, vecs) = herm_eig(&block, 1e-14)?;
        let keep: Vec<usize> = (0..m).filter(|&j| vals[j] >= 0.5).collect();
        let mut w = ComplexMatrix::zeros(n, keep.len());
        for (c, &j) in keep.iter().enumerate() {
            for (i, &k) in support.iter().enumerate() {
                w[(k, c)] = vecs[(i, j)];
            }
        }
        Ok(w)
    }

    pub fn projector(&self) -> Result<ComplexMatrix> {
        let w = self.frame()?;
        Ok(w.mul_adj(&w))
    }
}

pub fn interior_projector(w: &InteriorWeight) -> Result<ComplexMatrix> {
    w.projector()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_window_is_identity() {
        let b = GridBasis::new(16, 2.0, 1.0).unwrap();
        let w = InteriorWeight::new(&b, 1.0, 1.0).unwrap();
        assert_eq!(w.projector().unwrap(), ComplexMatrix::identity(16));
    }

    #[test]
    fn position_weights_before_momentum_cut() {
        let b = GridBasis::new(4, 1.0, 1.0).unwrap();
        let w = InteriorWeight::new(&b, 0.5, 0.5).unwrap();
        // x = −1, −0.5, 0, 0.5
        assert_eq!(w.position_weights(), vec![0.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn projector_law() {
        let b = GridBasis::new(128, 8.0, 1.0).unwrap();
        let p = InteriorWeight::default_for(&b).projector().unwrap();
        assert!(p.matmul(&p).sub(&p).max_abs() < 1e-10);
        assert!(p.hermitian_defect() < 1e-12);
    }

    #[test]
    fn smooth_step_limits() {
        assert_eq!(smooth_step(-0.1), 1.0);
        assert_eq!(smooth_step(1.1), 0.0);
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
        assert!((smooth_step(0.3) + smooth_step(0.7) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fraction_validation() {
        let b = GridBasis::new(16, 2.0, 1.0).unwrap();
        assert!(InteriorWeight::new(&b, 0.0, 0.5).is_err());
        assert!(InteriorWeight::new(&b, 0.5, 1.5).is_err());
    }
}
