//! Resolvent matrix elements of a unitary `U` on and off the unit circle.
//! All of them go through `(1 − zU†)^{−1}`; one Hessenberg reduction of `U†`
//! serves every `z`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::GridBasis;
use crate::linalg::{norm, ComplexMatrix, LuFactor, ShiftedSolver, C64};

/// `(I + iεA)^{−1}φ`, the regularisation of `φ` into the domain of `A`.
pub fn k_vector(a: &ComplexMatrix, phi: &[C64], epsilon: f64) -> Result<Vec<C64>> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {epsilon}")));
    }
    if !a.is_square() || a.rows() != phi.len() {
        return Err(Error::DimensionMismatch(format!("A is {}×{}, φ has {}", a.rows(), a.cols(), phi.len())));
    }
    let m = a.scale(C64::new(0.0, epsilon)).add_identity(C64::new(1.0, 0.0));
    Ok(LuFactor::new(&m)?.solve_vec(phi))
}

/// The shift `e^{−iap}` on the grid. For `a = dx` it permutes the sites
/// cyclically; its eigenvectors are the plane waves, with phases `−a·p_k`.
pub fn translation_model(basis: &GridBasis, shift: f64) -> ComplexMatrix {
    let d: Vec<C64> = basis.momenta().iter().map(|&p| C64::from_polar(1.0, -shift * p)).collect();
    basis.fft().momentum_diag_matrix(&d)
}

/// Eigenphases of [`translation_model`], wrapped to `(−π, π]` and ascending.
pub fn translation_phases(basis: &GridBasis, shift: f64) -> Vec<f64> {
    let mut th: Vec<f64> = basis.momenta().iter().map(|&p| crate::mourre::wrap_angle(-shift * p)).collect();
    th.sort_by(|a, b| a.total_cmp(b));
    th
}

/// `count` angles spread evenly over `[center − half_width, center + half_width]`,
/// each moved to the nearest midpoint between consecutive eigenphases, so
/// every angle sits as far from the point spectrum of the truncation as the
/// level spacing allows.
pub fn midpoint_angles(sorted_phases: &[f64], center: f64, half_width: f64, count: usize) -> Vec<f64> {
    let n = sorted_phases.len();
    if n == 0 || count == 0 {
        return Vec::new();
    }
    let mids: Vec<f64> = (0..n)
        .map(|k| {
            let a = sorted_phases[k];
            let b = if k + 1 < n { sorted_phases[k + 1] } else { sorted_phases[0] + 2.0 * PI };
            crate::mourre::wrap_angle(0.5 * (a + b))
        })
        .collect();
    (0..count)
        .map(|j| {
            let t = if count == 1 { center } else { center - half_width + 2.0 * half_width * j as f64 / (count - 1) as f64 };
            *mids.iter().min_by(|a, b| crate::mourre::angle_distance(**a, t).total_cmp(&crate::mourre::angle_distance(**b, t))).expect("nonempty")
        })
        .collect()
}

/// `r_k = 1 − ½·ratio^{−k}` for `k < count`.
pub fn geometric_radii(ratio: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| 1.0 - 0.5 * ratio.powi(-(k as i32))).collect()
}

pub const DEFAULT_RADIUS_RATIO: f64 = 1.189_207_115_002_721; // 2^{1/4}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTrace {
    pub theta_grid: Vec<f64>,
    /// Increasing radii in `(0, 1)`.
    pub r_sequence: Vec<f64>,
    /// `F⁺(θ, r) = ⟨φ, (1 − re^{iθ}U†)^{−1}ψ⟩`, indexed `[θ][r]`.
    pub values_inside: Vec<Vec<C64>>,
    /// `F⁻(θ, r) = ⟨φ, (1 − r^{−1}e^{iθ}U†)^{−1}ψ⟩`.
    pub values_outside: Vec<Vec<C64>>,
    /// `|F⁺(θ, r_k) − F⁺(θ, r_{k+1})|`.
    pub cauchy_gaps: Vec<Vec<f64>>,
    /// `(θ, r)` points whose solve failed; their values are NaN.
    pub failures: Vec<(f64, f64)>,
}

impl BoundaryTrace {
    /// First local minimum of the Cauchy gaps along `r`: where the approach
    /// to the circle stops converging and the level spacing takes over.
    pub fn cauchy_floor(&self, theta_index: usize) -> f64 {
        let g = &self.cauchy_gaps[theta_index];
        let mut k = 0;
        while k + 1 < g.len() && g[k + 1] < g[k] {
            k += 1;
        }
        g.get(k).copied().unwrap_or(f64::NAN)
    }

    /// Mean of [`Self::cauchy_floor`] over the angles. Single angles jitter
    /// with their distance to the nearest eigenphase; the mean does not.
    pub fn mean_cauchy_floor(&self) -> f64 {
        let n = self.theta_grid.len();
        (0..n).map(|j| self.cauchy_floor(j)).sum::<f64>() / n as f64
    }

    /// Whether the gaps along `r` never decrease, the signature of a pole.
    pub fn gaps_grow(&self, theta_index: usize) -> bool {
        self.cauchy_gaps[theta_index].windows(2).all(|w| w[1] >= w[0])
    }
}

fn check_vectors(u: &ComplexMatrix, vs: &[&[C64]]) -> Result<()> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch("U must be square".into()));
    }
    for v in vs {
        if v.len() != u.rows() {
            return Err(Error::DimensionMismatch(format!("vector of length {} against U of size {}", v.len(), u.rows())));
        }
        let nv = norm(v);
        if !((nv - 1.0).abs() <= 1e-8) {
            return Err(Error::InvalidArgument(format!("vectors must be normalized (norm {nv})")));
        }
    }
    Ok(())
}

pub fn boundary_trace(u: &ComplexMatrix, phi: &[C64], psi: &[C64], theta_grid: &[f64], r_sequence: &[f64]) -> Result<BoundaryTrace> {
    check_vectors(u, &[phi, psi])?;
    if r_sequence.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::InvalidArgument("radii must lie in (0, 1)".into()));
    }
    let solver = ShiftedSolver::new(&u.adjoint())?;
    let mut failures = Vec::new();
    let mut element = |z: C64, th: f64, r: f64| match solver.matrix_element(z, phi, psi) {
        Ok(v) if v.is_finite() => v,
        _ => {
            failures.push((th, r));
            C64::new(f64::NAN, f64::NAN)
        }
    };
    let mut inside = Vec::with_capacity(theta_grid.len());
    let mut outside = Vec::with_capacity(theta_grid.len());
    for &th in theta_grid {
        inside.push(r_sequence.iter().map(|&r| element(C64::from_polar(r, th), th, r)).collect::<Vec<_>>());
        outside.push(r_sequence.iter().map(|&r| element(C64::from_polar(1.0 / r, th), th, r)).collect::<Vec<_>>());
    }
    let cauchy_gaps = inside.iter().map(|row| row.windows(2).map(|w| (w[0] - w[1]).norm()).collect()).collect();
    Ok(BoundaryTrace {
        theta_grid: theta_grid.to_vec(),
        r_sequence: r_sequence.to_vec(),
        values_inside: inside,
        values_outside: outside,
        cauchy_gaps,
        failures,
    })
}

/// Poisson smoothing of the spectral measure of `φ`:
/// `d(θ) = (1/2π)⟨φ, [(1 − zU†)^{−1} − (1 − z̄^{−1}U†)^{−1}]φ⟩`, `z = re^{iθ}`.
/// The imaginary part, zero in exact arithmetic, is checked and dropped.
pub fn poisson_density(u: &ComplexMatrix, phi: &[C64], theta_grid: &[f64], r: f64) -> Result<Vec<f64>> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("radius must lie in (0, 1), got {r}")));
    }
    if !u.is_square() || phi.len() != u.rows() {
        return Err(Error::DimensionMismatch("φ must match U".into()));
    }
    let solver = ShiftedSolver::new(&u.adjoint())?;
    let scale = norm(phi).powi(2);
    theta_grid
        .iter()
        .map(|&th| {
            let inner = solver.matrix_element(C64::from_polar(r, th), phi, phi)?;
            let outer = solver.matrix_element(C64::from_polar(1.0 / r, th), phi, phi)?;
            let d = (inner - outer) / (2.0 * PI);
            if !(d.im.abs() <= 1e-10 * scale.max(1.0) * (1.0 + d.re.abs())) {
                return Err(Error::NonFinite(format!("density at θ = {th} has imaginary part {:.2e}", d.im)));
            }
            Ok(d.re)
        })
        .collect()
}

/// Periodic trapezoid rule on an evenly spaced full-circle grid.
pub fn circle_trapezoid(values: &[f64]) -> f64 {
    2.0 * PI * values.iter().sum::<f64>() / values.len() as f64
}

/// `count` evenly spaced angles on `[−π, π)`.
pub fn circle_grid(count: usize) -> Vec<f64> {
    (0..count).map(|k| -PI + 2.0 * PI * k as f64 / count as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_hermitian, random_unit_vector};

    fn e1(n: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); n];
        v[0] = C64::new(1.0, 0.0);
        v
    }

    #[test]
    fn k_vector_small_and_diagonal_cases() {
        let a = random_hermitian(12, 3);
        let phi = random_unit_vector(12, 4);
        assert_eq!(k_vector(&ComplexMatrix::zeros(12, 12), &phi, 0.3).unwrap(), phi);
        let x = k_vector(&a, &phi, 1e-8).unwrap();
        let an = crate::linalg::op_norm(&a).unwrap();
        assert!(crate::linalg::vec_distance(&x, &phi) <= 1e-6 * an);
        let d = [1.0, -2.0, 0.5];
        let dm = ComplexMatrix::from_real_diag(&d);
        let v = vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(2.0, 0.0)];
        let x = k_vector(&dm, &v, 0.7).unwrap();
        for k in 0..3 {
            assert!((x[k] - v[k] / C64::new(1.0, 0.7 * d[k])).norm() < 1e-14);
        }
        assert!(k_vector(&dm, &v, 0.0).is_err());
    }

    #[test]
    fn identity_scalar_cases() {
        let u = ComplexMatrix::identity(4);
        let rs = [0.5, 0.9, 0.99];
        let bt = boundary_trace(&u, &e1(4), &e1(4), &[PI, 0.0], &rs).unwrap();
        for (k, &r) in rs.iter().enumerate() {
            assert!((bt.values_inside[0][k] - 1.0 / (1.0 + r)).norm() < 1e-13);
            assert!((bt.values_inside[1][k] - 1.0 / (1.0 - r)).norm() < 1e-10);
        }
        assert!(bt.gaps_grow(1));
        let r = 0.9;
        let d = poisson_density(&u, &e1(4), &[0.0], r).unwrap();
        assert!((d[0] - (1.0 + r) / (1.0 - r) / (2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn shift_by_one_site_is_a_permutation() {
        let b = GridBasis::new(16, 3.0, 1.0).unwrap();
        let s = translation_model(&b, b.spacing());
        for i in 0..16 {
            for j in 0..16 {
                let expect = if i == (j + 1) % 16 { 1.0 } else { 0.0 };
                assert!((s[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn midpoints_avoid_phases() {
        let b = GridBasis::new(32, 3.0, 1.0).unwrap();
        let ph = translation_phases(&b, b.spacing());
        for t in midpoint_angles(&ph, 0.3, 0.5, 5) {
            let d = ph.iter().map(|&p| crate::mourre::angle_distance(p, t)).fold(f64::INFINITY, f64::min);
            assert!((d - PI / 32.0).abs() < 1e-12);
        }
    }
}
