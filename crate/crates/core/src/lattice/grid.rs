use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::fft::Fft;
use super::function::FunctionDesc;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// Periodic position grid on `[−L, L)` with `N = 2^k` points, carrying the
/// oscillator frequency `ω` used by `H_ω`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid", deny_unknown_fields)]
pub struct GridBasis {
    pub n_points: usize,
    pub half_width: f64,
    pub omega: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    n_points: i64,
    half_width: f64,
    omega: f64,
}

impl TryFrom<RawGrid> for GridBasis {
    type Error = Error;
    fn try_from(r: RawGrid) -> Result<Self> {
        if r.n_points <= 0 {
            return Err(Error::BadGrid(format!("n_points must be positive, got {}", r.n_points)));
        }
        GridBasis::new(r.n_points as usize, r.half_width, r.omega)
    }
}

impl GridBasis {
    /// Reference configuration used throughout the acceptance checks.
    pub const REFERENCE_N: usize = 512;
    pub const REFERENCE_L: f64 = 12.0;

    pub fn new(n_points: usize, half_width: f64, omega: f64) -> Result<Self> {
        if n_points < 2 || !n_points.is_power_of_two() {
            return Err(Error::BadGrid(format!("n_points must be a power of two ≥ 2, got {n_points}")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::BadGrid(format!("half_width must be positive and finite, got {half_width}")));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::BadGrid(format!("omega must be positive and finite, got {omega}")));
        }
        Ok(Self { n_points, half_width, omega })
    }

    pub fn reference() -> Self {
        Self::new(Self::REFERENCE_N, Self::REFERENCE_L, 1.0).expect("valid reference grid")
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n_points as f64
    }

    /// `x_k = −L + k·spacing`.
    pub fn points(&self) -> Vec<f64> {
        let dx = self.spacing();
        (0..self.n_points).map(|k| -self.half_width + k as f64 * dx).collect()
    }

    /// Signed integer frequency of FFT slot `k`, in `{−N/2, …, N/2−1}`.
    pub fn frequency_index(&self, k: usize) -> i64 {
        let n = self.n_points as i64;
        let k = k as i64;
        if k < n / 2 {
            k
        } else {
            k - n
        }
    }

    /// `p_m = 2π m / (2L)` in FFT order.
    pub fn momenta(&self) -> Vec<f64> {
        let dp = PI / self.half_width;
        (0..self.n_points).map(|k| self.frequency_index(k) as f64 * dp).collect()
    }

    /// `|p_{−N/2}| = π N / (2L)`, the largest representable momentum.
    pub fn p_max(&self) -> f64 {
        PI * self.n_points as f64 / (2.0 * self.half_width)
    }

    pub fn fft(&self) -> Fft {
        Fft::new(self.n_points).expect("grid size validated as a power of two")
    }

    /// Real-valued derivative of grid samples by Fourier multiplication. The
    /// Nyquist coefficient is dropped so the result stays real.
    pub fn spectral_derivative(&self, values: &[f64], order: u32) -> Vec<f64> {
        let plan = self.fft();
        let mut v: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        plan.forward(&mut v);
        let p = self.momenta();
        for (k, (z, pm)) in v.iter_mut().zip(&p).enumerate() {
            if self.frequency_index(k) == -(self.n_points as i64) / 2 {
                *z = C64::new(0.0, 0.0);
            } else {
                *z *= C64::new(0.0, *pm).powu(order);
            }
        }
        plan.inverse(&mut v);
        v.iter().map(|z| z.re).collect()
    }
}

pub fn position_op(basis: &GridBasis) -> ComplexMatrix {
    ComplexMatrix::from_real_diag(&basis.points())
}

/// `p = F† diag(p_m) F`.
pub fn momentum_op(basis: &GridBasis) -> ComplexMatrix {
    let d: Vec<C64> = basis.momenta().iter().map(|&p| C64::new(p, 0.0)).collect();
    basis.fft().momentum_diag_matrix(&d).hermitian_part()
}

/// `H_ω = p²/2 + ω² x²/2`.
pub fn hamiltonian_op(basis: &GridBasis) -> ComplexMatrix {
    let d: Vec<C64> = basis.momenta().iter().map(|&p| C64::new(0.5 * p * p, 0.0)).collect();
    let mut h = basis.fft().momentum_diag_matrix(&d).hermitian_part();
    let w2 = basis.omega * basis.omega;
    for (k, x) in basis.points().iter().enumerate() {
        h[(k, k)] += 0.5 * w2 * x * x;
    }
    h
}

pub fn multiplication_op(basis: &GridBasis, f: &FunctionDesc) -> Result<ComplexMatrix> {
    Ok(ComplexMatrix::from_real_diag(&sample(basis, f)?))
}

/// `f(x_k)` on the grid, rejecting non-finite values.
pub fn sample(basis: &GridBasis, f: &FunctionDesc) -> Result<Vec<f64>> {
    let xs = basis.points();
    let v: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    if let Some(k) = v.iter().position(|y| !y.is_finite()) {
        return Err(Error::NonFinite(format!("{f} at x = {}", xs[k])));
    }
    Ok(v)
}
