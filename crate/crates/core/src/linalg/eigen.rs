use serde::{Deserialize, Serialize};

use super::jacobi::jacobi_eig;
use super::matrix::{ComplexMatrix, C64};
use super::tridiag::tridiagonal_eig;
use crate::error::{Error, Result};

/// Largest matrix handled by the dense eigensolvers.
pub const EIG_DIM_CAP: usize = 4096;
/// Up to this size cyclic Jacobi is used; above it Householder + QL.
pub const JACOBI_MAX_DIM: usize = 32;
/// Default single-linkage tolerance for grouping eigenphases.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;

/// Gap below which eigenvalues of `Re U` are treated as one block when
/// splitting by `Im U`.
const RE_BLOCK_TOL: f64 = 1e-6;

/// Hermitian eigen-decomposition with ascending eigenvalues.
///
/// `tol` is the relative off-diagonal target for the Jacobi path; the QL path
/// always runs to machine precision.
pub fn herm_eig(h: &ComplexMatrix, tol: f64) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", h.rows(), h.cols())));
    }
    let n = h.dim();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if n > EIG_DIM_CAP {
        return Err(Error::InvalidArgument(format!("dimension {n} exceeds the eigensolver cap {EIG_DIM_CAP}")));
    }
    if !h.is_finite() {
        return Err(Error::NonFinite("matrix passed to herm_eig".into()));
    }
    let scale = h.frobenius_norm();
    let defect = h.hermitian_defect();
    if defect > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian(defect));
    }
    let sym = h.hermitian_part();
    let (vals, vecs) = if n <= JACOBI_MAX_DIM { jacobi_eig(&sym, tol)? } else { tridiagonal_eig(&sym)? };
    Ok(sort_pairs(vals, vecs))
}

/// Jacobi path regardless of size; kept public as an independent reference.
pub fn herm_eig_jacobi(h: &ComplexMatrix, tol: f64) -> Result<(Vec<f64>, ComplexMatrix)> {
    let defect = h.hermitian_defect();
    if defect > 1e-12 * h.frobenius_norm().max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian(defect));
    }
    let (vals, vecs) = jacobi_eig(&h.hermitian_part(), tol)?;
    Ok(sort_pairs(vals, vecs))
}

fn sort_pairs(vals: Vec<f64>, vecs: ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    if order.iter().enumerate().all(|(i, &j)| i == j) {
        return (vals, vecs);
    }
    (order.iter().map(|&j| vals[j]).collect(), vecs.select_cols(&order))
}

/// Eigenphases, eigenvectors and multiplicity clusters of a unitary matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    /// Angles in (−π, π], ascending.
    pub phases: Vec<f64>,
    /// Orthonormal eigenvectors as columns, aligned with `phases`.
    #[serde(skip)]
    pub vectors: Option<ComplexMatrix>,
    /// Index groups; each cluster is contiguous along the circle.
    pub clusters: Vec<Vec<usize>>,
    pub cluster_tol: f64,
    /// Largest of `‖U v_j − e^{iθ_j} v_j‖` and `‖V†V − I‖`.
    pub residual_tol: f64,
}

impl SpectralDecomposition {
    pub fn vectors(&self) -> &ComplexMatrix {
        self.vectors.as_ref().expect("spectral decomposition without eigenvectors")
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    /// Circular mean of the phases in a cluster.
    pub fn cluster_phase(&self, c: usize) -> f64 {
        let s: C64 = self.clusters[c].iter().map(|&j| C64::from_polar(1.0, self.phases[j])).sum();
        s.arg()
    }

    pub fn cluster_of(&self, j: usize) -> usize {
        self.clusters.iter().position(|c| c.contains(&j)).expect("index belongs to a cluster")
    }

    /// Orthogonal projector onto the span of the given eigenvectors.
    pub fn projector(&self, idx: &[usize]) -> ComplexMatrix {
        let w = self.vectors().select_cols(idx);
        w.mul_adj(&w)
    }
}

/// Spectral decomposition of a unitary matrix by simultaneous diagonalisation
/// of `Re U` and `Im U`: `Re U` first, then `Im U` inside each block of
/// (numerically) equal `Re U` eigenvalues.
pub fn unitary_eig(u: &ComplexMatrix, cluster_tol: f64) -> Result<SpectralDecomposition> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch("unitary_eig needs a square matrix".into()));
    }
    let defect = u.unitary_defect();
    if !(defect <= 1e-10) {
        return Err(Error::NotUnitary(defect));
    }
    let n = u.dim();
    let re = u.hermitian_part();
    let im = u.skew_part();
    let (revals, mut vecs) = herm_eig(&re, 1e-15)?;

    // Blocks of nearly equal cos θ.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && revals[end] - revals[end - 1] <= RE_BLOCK_TOL {
            end += 1;
        }
        if end - start > 1 {
            let idx: Vec<usize> = (start..end).collect();
            let w = vecs.select_cols(&idx);
            let s = im.compress(&w);
            let (_, y) = herm_eig(&s, 1e-15)?;
            let rotated = w.matmul(&y);
            for (k, &j) in idx.iter().enumerate() {
                vecs.set_col(j, &rotated.col(k));
            }
        }
        start = end;
    }

    let uv = u.matmul(&vecs);
    let mut phases = vec![0.0; n];
    let mut residual: f64 = 0.0;
    for (j, slot) in phases.iter_mut().enumerate() {
        let v = vecs.col(j);
        let w = uv.col(j);
        let lambda: C64 = v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
        let mut th = lambda.arg();
        if th <= -std::f64::consts::PI {
            th = std::f64::consts::PI;
        }
        *slot = th;
        let e = C64::from_polar(1.0, th);
        let r: f64 = v.iter().zip(&w).map(|(a, b)| (b - a * e).norm_sqr()).sum::<f64>().sqrt();
        residual = residual.max(r);
    }
    let orth = vecs.adj_mul(&vecs).add_identity(C64::new(-1.0, 0.0)).frobenius_norm();
    residual = residual.max(orth);
    if cluster_tol < 10.0 * residual {
        return Err(Error::DegenerateClustering { cluster_tol, residual_tol: residual });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| phases[a].total_cmp(&phases[b]));
    let phases: Vec<f64> = order.iter().map(|&j| phases[j]).collect();
    let vecs = vecs.select_cols(&order);
    let clusters = circular_clusters(&phases, cluster_tol);
    Ok(SpectralDecomposition { phases, vectors: Some(vecs), clusters, cluster_tol, residual_tol: residual })
}

/// Single-linkage clustering of ascending angles with the circular metric.
pub fn circular_clusters(sorted_phases: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let n = sorted_phases.len();
    if n == 0 {
        return Vec::new();
    }
    let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
    for j in 1..n {
        if sorted_phases[j] - sorted_phases[j - 1] <= tol {
            clusters.last_mut().unwrap().push(j);
        } else {
            clusters.push(vec![j]);
        }
    }
    let wrap_gap = sorted_phases[0] + 2.0 * std::f64::consts::PI - sorted_phases[n - 1];
    if clusters.len() > 1 && wrap_gap <= tol {
        let last = clusters.pop().unwrap();
        let mut first = last;
        first.extend_from_slice(&clusters[0]);
        clusters[0] = first;
    }
    clusters
}

/// `e^{isH}` for Hermitian `H` through its eigen-decomposition.
pub fn expm_skew(h: &ComplexMatrix, s: f64) -> Result<ComplexMatrix> {
    let (vals, v) = herm_eig(h, 1e-15)?;
    let ph: Vec<C64> = vals.iter().map(|&l| C64::from_polar(1.0, s * l)).collect();
    Ok(v.scale_cols(&ph).mul_adj(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_hermitian, random_unitary};

    fn recomposition(h: &ComplexMatrix, vals: &[f64], v: &ComplexMatrix) -> f64 {
        let d: Vec<C64> = vals.iter().map(|&x| C64::new(x, 0.0)).collect();
        v.scale_cols(&d).mul_adj(v).sub(h).frobenius_norm()
    }

    #[test]
    fn closed_form_small_cases() {
        let (l, v) = herm_eig(&ComplexMatrix::from_real_diag(&[1.0, 2.0]), 1e-14).unwrap();
        assert_eq!(l, vec![1.0, 2.0]);
        assert!(v.sub(&ComplexMatrix::identity(2)).max_abs() < 1e-15);
        let x = ComplexMatrix::from_fn(2, 2, |i, j| if i != j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
        let (l, _) = herm_eig(&x, 1e-14).unwrap();
        assert!((l[0] + 1.0).abs() < 1e-14 && (l[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn recomposes_random_hermitian() {
        let h = random_hermitian(8, 1);
        let (l, v) = herm_eig(&h, 1e-14).unwrap();
        assert!(recomposition(&h, &l, &v) <= 1e-12 * h.frobenius_norm());
        assert!(l.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn ql_path_agrees_with_jacobi() {
        let h = random_hermitian(60, 4);
        let (l1, v1) = herm_eig(&h, 1e-14).unwrap();
        let (l2, _) = herm_eig_jacobi(&h, 1e-14).unwrap();
        for (a, b) in l1.iter().zip(&l2) {
            assert!((a - b).abs() < 1e-11 * h.frobenius_norm());
        }
        assert!(recomposition(&h, &l1, &v1) <= 1e-12 * h.frobenius_norm());
        assert!(v1.unitary_defect() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(3);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(herm_eig(&m, 1e-12), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn unitary_small_cases() {
        let d = unitary_eig(&ComplexMatrix::identity(3), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(d.clusters.len(), 1);
        assert!(d.phases.iter().all(|p| p.abs() < 1e-15));
        let u = ComplexMatrix::from_diag(&[C64::new(0.0, 1.0), C64::new(-1.0, 0.0)]);
        let d = unitary_eig(&u, DEFAULT_CLUSTER_TOL).unwrap();
        let half_pi = std::f64::consts::FRAC_PI_2;
        assert!((d.phases[0] - half_pi).abs() < 1e-15 && (d.phases[1] - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn phases_of_exponential_are_eigenvalues() {
        let h = random_hermitian(10, 8);
        let nh = crate::linalg::op_norm(&h).unwrap();
        let h = h.scale_real(3.0 / nh);
        let (l, _) = herm_eig(&h, 1e-14).unwrap();
        let d = unitary_eig(&expm_skew(&h, 1.0).unwrap(), DEFAULT_CLUSTER_TOL).unwrap();
        for (a, b) in l.iter().zip(&d.phases) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_blocks_are_split_by_imaginary_part() {
        // e^{±iθ} share cos θ; the Im step must separate them.
        let v = random_unitary(4, 2);
        let ph = [0.7, -0.7, 0.7, 2.0];
        let d: Vec<C64> = ph.iter().map(|&t| C64::from_polar(1.0, t)).collect();
        let u = v.scale_cols(&d).mul_adj(&v);
        let dec = unitary_eig(&u, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(dec.clusters.len(), 3);
        let resolution = dec.vectors().mul_adj(dec.vectors());
        assert!(resolution.sub(&ComplexMatrix::identity(4)).max_abs() < 1e-9);
        assert!(dec.residual_tol < 1e-12);
    }

    #[test]
    fn refuses_ill_posed_clustering() {
        let u = random_unitary(6, 3);
        assert!(matches!(unitary_eig(&u, 1e-20), Err(Error::DegenerateClustering { .. })));
    }

    #[test]
    fn clusters_wrap_across_the_seam() {
        let pi = std::f64::consts::PI;
        let c = circular_clusters(&[-pi + 1e-9, 0.0, pi], 1e-7);
        assert_eq!(c.len(), 2);
        assert!(c[0].contains(&0) && c[0].contains(&2));
    }
}
