use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eigen::herm_eig;
use super::matrix::{dot, norm, ComplexMatrix, C64};
use super::tridiag::tridiagonal_eigensystem;
use crate::error::{Error, Result};

const LANCZOS_SEED: u64 = 0x6f70_6e6f_726d;
const LANCZOS_REL_TOL: f64 = 1e-12;

/// Largest singular value.
///
/// Lanczos on `B†B` with full reorthogonalisation from a seeded start vector.
/// When the Krylov space becomes invariant before convergence the iteration
/// restarts with a fresh vector orthogonal to everything seen so far, so a
/// start vector that misses the top singular direction cannot stall it.
pub fn op_norm(b: &ComplexMatrix) -> Result<f64> {
    let n = b.cols();
    if n == 0 || b.rows() == 0 {
        return Ok(0.0);
    }
    if !b.is_finite() {
        return Err(Error::NonFinite("matrix passed to op_norm".into()));
    }
    let scale = b.frobenius_norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(LANCZOS_SEED);
    let apply = |v: &[C64]| b.adj_mul_vec(&b.mul_vec(v));

    let mut basis: Vec<Vec<C64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut q = random_unit(n, &mut rng, &basis);
    let mut prev_theta = f64::NAN;

    while basis.len() < n {
        basis.push(q.clone());
        let mut w = apply(&q);
        let a = dot(&q, &w).re;
        alpha.push(a);
        // Two passes of classical Gram-Schmidt against the whole basis.
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
        }
        let bnext = norm(&w);

        let (vals, vecs) = tridiagonal_eigensystem(&alpha, &beta)?;
        let k = vals.len() - 1;
        let theta = vals[k];
        let resid = bnext * vecs[k][alpha.len() - 1].abs();
        let converged = resid <= LANCZOS_REL_TOL * theta.abs().max(f64::MIN_POSITIVE)
            || (theta - prev_theta).abs() <= LANCZOS_REL_TOL * theta.abs() && resid <= 1e-8 * theta.abs();
        if converged || basis.len() == n {
            return Ok(theta.max(0.0).sqrt());
        }
        prev_theta = theta;

        if bnext <= 1e-13 * scale * scale {
            // Invariant subspace: restart orthogonally.
            beta.push(0.0);
            q = random_unit(n, &mut rng, &basis);
        } else {
            beta.push(bnext);
            q = w.iter().map(|x| x / bnext).collect();
        }
    }
    let (vals, _) = tridiagonal_eigensystem(&alpha, &beta)?;
    Ok(vals.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng, against: &[Vec<C64>]) -> Vec<C64> {
    loop {
        let mut v: Vec<C64> = (0..n).map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
        for _ in 0..2 {
            for u in against {
                let c = dot(u, &v);
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nv = norm(&v);
        if nv > 1e-8 {
            return v.iter().map(|x| x / nv).collect();
        }
    }
}

/// Singular values in descending order, as square roots of the eigenvalues
/// of `B†B`. Values below the rounding floor of that Gram matrix are noise.
pub fn singular_values(b: &ComplexMatrix) -> Result<Vec<f64>> {
    if b.cols() == 0 {
        return Ok(Vec::new());
    }
    let gram = b.adj_mul(b).hermitian_part();
    let (vals, _) = herm_eig(&gram, 1e-15)?;
    Ok(vals.iter().rev().map(|&l| l.max(0.0).sqrt()).collect())
}

/// Operator norm of `P M P` for a diagonal 0/1-or-weight vector `w`, with the
/// weights applied on both sides.
pub fn weighted_op_norm(m: &ComplexMatrix, w: &[f64]) -> Result<f64> {
    let d: Vec<C64> = w.iter().map(|&x| C64::new(x, 0.0)).collect();
    op_norm(&m.scale_rows(&d).scale_cols(&d))
}

/// `‖v‖` of the difference of two vectors.
pub fn vec_distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::ZERO;
    use crate::linalg::random::random_matrix;

    #[test]
    fn identity_and_diagonal() {
        assert!((op_norm(&ComplexMatrix::identity(5)).unwrap() - 1.0).abs() < 1e-12);
        let d = ComplexMatrix::from_diag(&[C64::new(3.0, 0.0), C64::new(0.0, -4.0)]);
        assert!((op_norm(&d).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn lanczos_matches_full_svd() {
        for seed in 0..5 {
            let b = random_matrix(16, 16, seed);
            let s = singular_values(&b).unwrap();
            let o = op_norm(&b).unwrap();
            assert!((o - s[0]).abs() <= 1e-8 * s[0], "seed {seed}: {o} vs {}", s[0]);
        }
    }

    #[test]
    fn start_vector_orthogonal_to_top_direction() {
        // Block-diagonal with a tiny and a large block; Lanczos must find 7.
        let mut d = vec![C64::new(1e-3, 0.0); 40];
        d[39] = C64::new(7.0, 0.0);
        let m = ComplexMatrix::from_diag(&d);
        assert!((op_norm(&m).unwrap() - 7.0).abs() < 1e-10);
    }

    #[test]
    fn rectangular_frame() {
        let b = random_matrix(20, 6, 3);
        let s = singular_values(&b).unwrap();
        assert_eq!(s.len(), 6);
        assert!((op_norm(&b).unwrap() - s[0]).abs() < 1e-9 * s[0]);
    }

    #[test]
    fn unitary_and_rank_one() {
        let u = ComplexMatrix::from_fn(3, 3, |i, j| if (i + 1) % 3 == j { C64::new(0.0, 1.0) } else { ZERO });
        for s in singular_values(&u).unwrap() {
            assert!((s - 1.0).abs() < 1e-12);
        }
        let v = [C64::new(0.6, 0.0), C64::new(0.0, 0.8), ZERO];
        let r = ComplexMatrix::from_fn(3, 3, |i, j| v[i] * v[j].conj());
        let s = singular_values(&r).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-12 && s[1].abs() < 1e-7 && s[2].abs() < 1e-7);
        assert!(singular_values(&ComplexMatrix::zeros(4, 4)).unwrap().iter().all(|&x| x == 0.0));
    }
}
