use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

const TAYLOR_MAX_TERMS: usize = 30;

/// Induced 1-norm (max column sum).
pub fn norm1(m: &ComplexMatrix) -> f64 {
    (0..m.cols()).map(|j| (0..m.rows()).map(|i| m[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `e^M` for a general square matrix by scaling and squaring around a
/// truncated Taylor series. Meant for moderate norms; accuracy is about
/// `1e-13` relative for `‖M‖ ≤ 1`.
pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("expm needs a square matrix".into()));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix passed to expm".into()));
    }
    let n = m.dim();
    let nrm = norm1(m);
    let squarings = if nrm > 0.5 { (nrm / 0.5).log2().ceil() as i32 } else { 0 };
    let a = m.scale_real(0.5f64.powi(squarings));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=TAYLOR_MAX_TERMS {
        term = term.matmul(&a).scale_real(1.0 / k as f64);
        sum.axpy(C64::new(1.0, 0.0), &term);
        if term.max_abs() <= f64::EPSILON * 1e-2 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigen::expm_skew;
    use crate::linalg::random::{random_hermitian, random_matrix};

    #[test]
    fn agrees_with_spectral_route_on_skew_input() {
        let h = random_hermitian(6, 11);
        let m = h.scale(C64::new(0.0, 0.7));
        let a = expm(&m).unwrap();
        let b = expm_skew(&h, 0.7).unwrap();
        assert!(a.sub(&b).max_abs() < 1e-12);
    }

    #[test]
    fn inverse_law_for_general_input() {
        let b = random_matrix(6, 6, 5).scale_real(0.3);
        let p = expm(&b).unwrap().matmul(&expm(&b.scale_real(-1.0)).unwrap());
        assert!(p.sub(&ComplexMatrix::identity(6)).max_abs() < 1e-12);
    }

    #[test]
    fn nilpotent_closed_form() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = C64::new(2.0, 1.0);
        let e = expm(&m).unwrap();
        assert!((e[(0, 1)] - C64::new(2.0, 1.0)).norm() < 1e-15);
        assert!((e[(0, 0)] - 1.0).norm() < 1e-15 && e[(1, 0)].norm() == 0.0);
    }
}
