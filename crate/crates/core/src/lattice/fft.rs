//! Unitary discrete Fourier transform on `N = 2^k` points.
//!
//! Convention: `(F ψ)_m = N^{-1/2} Σ_k ψ_k e^{-2πi m k / N}` with `m` in FFT
//! order, so that momentum-diagonal operators read `F† diag(f(p_m)) F`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// Precomputed radix-2 plan. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Fft {
    n: usize,
    twiddles: Vec<C64>,
    bitrev: Vec<usize>,
    scale: f64,
}

impl Fft {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::BadGrid(format!("FFT length {n} is not a power of two")));
        }
        let bits = n.trailing_zeros();
        let bitrev = (0..n).map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) }).collect();
        let twiddles = (0..n / 2).map(|k| C64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64)).collect();
        Ok(Self { n, twiddles, bitrev, scale: 1.0 / (n as f64).sqrt() })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn transform(&self, data: &mut [C64], inverse: bool) {
        assert_eq!(data.len(), self.n, "FFT length mismatch");
        for i in 0..self.n {
            let j = self.bitrev[i];
            if i < j {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= self.n {
            let half = len / 2;
            let stride = self.n / len;
            for start in (0..self.n).step_by(len) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let w = if inverse { w.conj() } else { w };
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            len <<= 1;
        }
        data.iter_mut().for_each(|z| *z *= self.scale);
    }

    pub fn forward(&self, data: &mut [C64]) {
        self.transform(data, false);
    }

    pub fn inverse(&self, data: &mut [C64]) {
        self.transform(data, true);
    }

    /// `F† diag(d) F v` in place.
    pub fn apply_momentum_diag(&self, d: &[C64], v: &mut [C64]) {
        self.forward(v);
        v.iter_mut().zip(d).for_each(|(x, s)| *x *= s);
        self.inverse(v);
    }

    /// Applies `F† diag(d) F` to every column of `m`.
    pub fn apply_momentum_diag_to_columns(&self, d: &[C64], m: &mut ComplexMatrix) {
        let mut rows = m.transpose();
        self.apply_momentum_diag_to_rows(d, &mut rows);
        *m = rows.transpose();
    }

    /// Applies `F† diag(d) F` to every row of `m`, each row read as a state.
    pub fn apply_momentum_diag_to_rows(&self, d: &[C64], m: &mut ComplexMatrix) {
        for r in 0..m.rows() {
            self.apply_momentum_diag(d, m.row_mut(r));
        }
    }

    pub fn forward_rows(&self, m: &mut ComplexMatrix) {
        for r in 0..m.rows() {
            self.forward(m.row_mut(r));
        }
    }

    pub fn inverse_rows(&self, m: &mut ComplexMatrix) {
        for r in 0..m.rows() {
            self.inverse(m.row_mut(r));
        }
    }

    /// Dense matrix of `F† diag(d) F`. The result is circulant, so a single
    /// inverse transform of `d` fixes every entry.
    pub fn momentum_diag_matrix(&self, d: &[C64]) -> ComplexMatrix {
        let n = self.n;
        let mut c = d.to_vec();
        self.inverse(&mut c);
        // c_k = N^{-1/2} Σ_m d_m e^{2πi mk/N}; entry (j,k) = N^{-1/2} c_{j−k}
        let s = self.scale;
        ComplexMatrix::from_fn(n, n, |j, k| c[(j + n - k) % n] * s)
    }
}

/// Dense unitary DFT matrix, the reference for the FFT path.
pub fn dft_matrix(n: usize) -> ComplexMatrix {
    let s = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, n, |m, k| C64::from_polar(s, -2.0 * PI * ((m * k) % n) as f64 / n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::random_vector;

    #[test]
    fn fft_agrees_with_dense_dft() {
        for n in [1usize, 2, 8, 64, 256] {
            let plan = Fft::new(n).unwrap();
            let v = random_vector(n, n as u64);
            let mut f = v.clone();
            plan.forward(&mut f);
            let dense = dft_matrix(n).mul_vec(&v);
            let err = f.iter().zip(&dense).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12, "n={n}: {err}");
            plan.inverse(&mut f);
            let back = f.iter().zip(&v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(back < 1e-12);
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(matches!(Fft::new(12), Err(Error::BadGrid(_))));
    }

    #[test]
    fn circulant_matrix_matches_column_application() {
        let n = 32;
        let plan = Fft::new(n).unwrap();
        let d = random_vector(n, 5);
        let m = plan.momentum_diag_matrix(&d);
        let mut cols = ComplexMatrix::identity(n);
        plan.apply_momentum_diag_to_columns(&d, &mut cols);
        assert!(m.sub(&cols).max_abs() < 1e-13);
    }
}
