//! Dense LU with partial pivoting and a Hessenberg-based solver for families
//! of shifted systems `(I − z M) x = b`.

use super::expm::norm1;
use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// `PA = LU` with unit-lower `L`, both stored in one matrix.
#[derive(Clone, Debug)]
pub struct LuFactor {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    norm1: f64,
}

impl LuFactor {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch("LU needs a square matrix".into()));
        }
        if !a.is_finite() {
            return Err(Error::NonFinite("matrix passed to LU".into()));
        }
        let n = a.dim();
        let anorm = norm1(a);
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n).map(|i| (i, lu[(i, k)].norm())).fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= f64::EPSILON * anorm * 1e-3 || pmax == 0.0 {
                return Err(Error::Singular(format!("LU pivot {k} of {n}")));
            }
            if p != k {
                perm.swap(p, k);
                let d = lu.data_mut();
                for j in 0..n {
                    d.swap(k * n + j, p * n + j);
                }
            }
            let piv = lu[(k, k)];
            let (top, bottom) = lu.data_mut().split_at_mut((k + 1) * n);
            let krow = &top[k * n..];
            for row in bottom.chunks_mut(n) {
                let l = row[k] / piv;
                row[k] = l;
                if l != ZERO {
                    for (x, u) in row[k + 1..].iter_mut().zip(&krow[k + 1..]) {
                        *x -= l * u;
                    }
                }
            }
        }
        Ok(Self { lu, perm, norm1: anorm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve_vec(&self, b: &[C64]) -> Vec<C64> {
        let n = self.dim();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let s: C64 = row[..i].iter().zip(&x[..i]).map(|(a, b)| a * b).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s: C64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(a, b)| a * b).sum();
            x[i] = (x[i] - s) / row[i];
        }
        x
    }

    /// Solve `A† x = b`.
    pub fn solve_adjoint_vec(&self, b: &[C64]) -> Vec<C64> {
        let n = self.dim();
        // A† = U† L† P, so solve U† y = b, L† w = y, x = Pᵀ w.
        let mut y = b.to_vec();
        for i in 0..n {
            let s: C64 = (0..i).map(|k| self.lu[(k, i)].conj() * y[k]).sum();
            y[i] = (y[i] - s) / self.lu[(i, i)].conj();
        }
        for i in (0..n).rev() {
            let s: C64 = (i + 1..n).map(|k| self.lu[(k, i)].conj() * y[k]).sum();
            y[i] -= s;
        }
        let mut x = vec![ZERO; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        x
    }

    pub fn solve_mat(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let cols: Vec<Vec<C64>> = (0..b.cols()).map(|j| self.solve_vec(&b.col(j))).collect();
        ComplexMatrix::from_columns(&cols).expect("columns of equal length")
    }

    pub fn inverse(&self) -> ComplexMatrix {
        self.solve_mat(&ComplexMatrix::identity(self.dim()))
    }

    /// 1-norm condition number estimate `‖A‖₁·est(‖A⁻¹‖₁)` by Hager's method.
    pub fn condition_estimate(&self) -> f64 {
        let n = self.dim();
        let mut x = vec![C64::new(1.0 / n as f64, 0.0); n];
        let mut est = 0.0;
        for _ in 0..5 {
            let y = self.solve_vec(&x);
            let ny: f64 = y.iter().map(|z| z.norm()).sum();
            if ny <= est {
                break;
            }
            est = ny;
            let s: Vec<C64> = y.iter().map(|z| if z.norm() > 0.0 { z / z.norm() } else { ONE }).collect();
            let w = self.solve_adjoint_vec(&s);
            let (jmax, wmax) = w.iter().enumerate().map(|(j, z)| (j, z.norm())).fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
            let xw: f64 = w.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
            if wmax <= xw {
                break;
            }
            x = vec![ZERO; n];
            x[jmax] = ONE;
        }
        self.norm1 * est
    }
}

pub fn solve(a: &ComplexMatrix, b: &[C64]) -> Result<Vec<C64>> {
    Ok(LuFactor::new(a)?.solve_vec(b))
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(LuFactor::new(a)?.inverse())
}

/// Upper Hessenberg form `M = Q H Q†` computed once, after which each shifted
/// system `(I − z M) x = b` costs `O(n²)`.
#[derive(Clone, Debug)]
pub struct ShiftedSolver {
    h: ComplexMatrix,
    q: ComplexMatrix,
}

impl ShiftedSolver {
    pub fn new(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch("Hessenberg reduction needs a square matrix".into()));
        }
        let n = m.dim();
        let mut h = m.clone();
        let mut q = ComplexMatrix::identity(n);
        for k in 0..n.saturating_sub(2) {
            let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
            let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let tail: f64 = v[1..].iter().map(|z| z.norm_sqr()).sum();
            if tail == 0.0 {
                continue;
            }
            let ph = if v[0].norm() == 0.0 { ONE } else { v[0] / v[0].norm() };
            v[0] += ph * xnorm;
            let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|z| *z /= vn);
            // H ← (I − 2vv†) H (I − 2vv†), Q ← Q (I − 2vv†)
            let mut s = vec![ZERO; n - k];
            for (i, vi) in v.iter().enumerate() {
                let vc = vi.conj();
                for (acc, x) in s.iter_mut().zip(&h.row(k + 1 + i)[k..]) {
                    *acc += vc * x;
                }
            }
            for (i, vi) in v.iter().enumerate() {
                let f = vi * 2.0;
                for (x, acc) in h.row_mut(k + 1 + i)[k..].iter_mut().zip(&s) {
                    *x -= f * acc;
                }
            }
            for mat in [&mut h, &mut q] {
                for r in 0..n {
                    let row = mat.row_mut(r);
                    let s: C64 = v.iter().enumerate().map(|(i, vi)| row[k + 1 + i] * vi).sum();
                    for (i, vi) in v.iter().enumerate() {
                        row[k + 1 + i] -= s * vi.conj() * 2.0;
                    }
                }
            }
            for i in k + 2..n {
                h[(i, k)] = ZERO;
            }
        }
        Ok(Self { h, q })
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// Solve `(I − z M) x = b`.
    pub fn solve(&self, z: C64, b: &[C64]) -> Result<Vec<C64>> {
        let y = self.solve_reduced(z, &self.q.adj_mul_vec(b))?;
        Ok(self.q.mul_vec(&y))
    }

    /// `⟨φ, (I − z M)⁻¹ ψ⟩` with both vectors given in the original basis.
    pub fn matrix_element(&self, z: C64, phi: &[C64], psi: &[C64]) -> Result<C64> {
        let y = self.solve_reduced(z, &self.q.adj_mul_vec(psi))?;
        let qphi = self.q.adj_mul_vec(phi);
        Ok(qphi.iter().zip(&y).map(|(a, b)| a.conj() * b).sum())
    }

    /// Solve in the Hessenberg basis: Gaussian elimination with adjacent-row
    /// pivoting keeps the upper-triangular fill to the original pattern.
    fn solve_reduced(&self, z: C64, b: &[C64]) -> Result<Vec<C64>> {
        let n = self.dim();
        let mut a = self.h.scale(-z);
        for i in 0..n {
            a[(i, i)] += ONE;
        }
        let scale = norm1(&a);
        let mut x = b.to_vec();
        for k in 0..n {
            if k + 1 < n && a[(k + 1, k)].norm() > a[(k, k)].norm() {
                let d = a.data_mut();
                for j in k..n {
                    d.swap(k * n + j, (k + 1) * n + j);
                }
                x.swap(k, k + 1);
            }
            let piv = a[(k, k)];
            if piv.norm() <= f64::EPSILON * scale * 1e-3 {
                return Err(Error::Singular(format!("shifted system at z = {z}")));
            }
            if k + 1 < n {
                let l = a[(k + 1, k)] / piv;
                if l != ZERO {
                    for j in k + 1..n {
                        let u = a[(k, j)];
                        a[(k + 1, j)] -= l * u;
                    }
                    let xk = x[k];
                    x[k + 1] -= l * xk;
                }
                a[(k + 1, k)] = ZERO;
            }
        }
        for i in (0..n).rev() {
            let row = a.row(i);
            let s: C64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(p, q)| p * q).sum();
            x[i] = (x[i] - s) / row[i];
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::norm;
    use crate::linalg::random::{random_matrix, random_vector};

    #[test]
    fn lu_solves_random_systems() {
        let a = random_matrix(12, 12, 2);
        let b = random_vector(12, 3);
        let x = solve(&a, &b).unwrap();
        let r: Vec<C64> = a.mul_vec(&x).iter().zip(&b).map(|(p, q)| p - q).collect();
        assert!(norm(&r) < 1e-12);
        let lu = LuFactor::new(&a).unwrap();
        let xa = lu.solve_adjoint_vec(&b);
        let ra: Vec<C64> = a.adj_mul_vec(&xa).iter().zip(&b).map(|(p, q)| p - q).collect();
        assert!(norm(&ra) < 1e-12);
        let inv = lu.inverse();
        assert!(a.matmul(&inv).sub(&ComplexMatrix::identity(12)).max_abs() < 1e-12);
    }

    #[test]
    fn condition_estimate_is_a_lower_bound_close_to_exact() {
        let a = random_matrix(10, 10, 7);
        let lu = LuFactor::new(&a).unwrap();
        let exact = norm1(&a) * norm1(&lu.inverse());
        let est = lu.condition_estimate();
        assert!(est <= exact * (1.0 + 1e-12) && est >= exact / 10.0, "{est} vs {exact}");
    }

    #[test]
    fn singular_is_reported() {
        let mut a = ComplexMatrix::identity(3);
        a[(2, 2)] = ZERO;
        assert!(matches!(LuFactor::new(&a), Err(Error::Singular(_))));
    }

    #[test]
    fn shifted_solver_matches_lu() {
        let m = random_matrix(15, 15, 9).scale_real(0.2);
        let s = ShiftedSolver::new(&m).unwrap();
        let b = random_vector(15, 4);
        for z in [C64::new(0.3, 0.1), C64::new(-0.9, 0.2), C64::new(0.0, 1.5)] {
            let a = ComplexMatrix::identity(15).sub(&m.scale(z));
            let x1 = solve(&a, &b).unwrap();
            let x2 = s.solve(z, &b).unwrap();
            let d: Vec<C64> = x1.iter().zip(&x2).map(|(p, q)| p - q).collect();
            assert!(norm(&d) < 1e-11 * norm(&x1));
        }
    }
}
