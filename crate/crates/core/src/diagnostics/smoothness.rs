//! The five equivalent constants of `U`-smoothness for a bounded `B`.
//! Sups over unit vectors are exact largest eigenvalues here; the sampled
//! `C₁` over given vectors is reported alongside as a lower bound.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::resolvent::circle_grid;
use crate::error::{Error, Result};
use crate::linalg::{op_norm, unitary_eig, ComplexMatrix, LuFactor, SpectralDecomposition, C64, DEFAULT_CLUSTER_TOL};
use crate::mourre::{spectral_projector, Arc};

pub const MIN_N_MAX: usize = 16;
/// `C₁` counts as divergent when doubling `n_max` grows it by more than this.
pub const C1_GROWTH_LIMIT: f64 = 1.25;

/// Radii `0.9, 0.95, 0.98, 0.99` times `64` angles. Closer to the circle the
/// Poisson kernel resolves single eigenphases of a truncation, and the
/// constants measure its level spacing rather than the density.
pub fn default_smoothness_z_grid() -> Vec<C64> {
    let angles = circle_grid(64);
    [0.9, 0.95, 0.98, 0.99].iter().flat_map(|&r| angles.iter().map(move |&t| C64::from_polar(r, t))).collect()
}

/// Arcs of length `2π/2^k`, `k = 2, …, log₂N − 1`, with offsets stepping by
/// half a length around the circle.
pub fn dyadic_arcs(n: usize) -> Vec<Arc> {
    let kmax = (n.max(8) as f64).log2().floor() as u32 - 1;
    let mut arcs = Vec::new();
    for k in 2..=kmax {
        let len = 2.0 * PI / 2f64.powi(k as i32);
        let steps = 2usize << k;
        for s in 0..steps {
            let lo = -PI + s as f64 * len / 2.0;
            arcs.push(Arc::new(lo, lo + len).expect("dyadic arc has positive length"));
        }
    }
    arcs
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    /// `(1/2π) sup Σ_{|n|≤n_max} ‖BUⁿψ‖²`; `None` when it keeps growing with `n_max`.
    pub c1: Option<f64>,
    /// The truncated sum at `n_max` whether or not it has settled.
    pub c1_truncated: f64,
    /// `C₁` at `n_max` over `C₁` at `n_max/2`.
    pub c1_growth: f64,
    /// Largest truncated sum over the supplied vectors.
    pub c1_sampled: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub n_max: usize,
    pub z_grid_size: usize,
    pub arc_count: usize,
    /// Largest pairwise relative gap among `C₁, C₃, C₄, C₅`.
    pub agreement_spread: f64,
}

/// Pairwise `|a − b|/max(a, b)`, maximised.
pub fn relative_spread(values: &[f64]) -> f64 {
    let mut s: f64 = 0.0;
    for (i, &a) in values.iter().enumerate() {
        for &b in &values[i + 1..] {
            let m = a.abs().max(b.abs());
            if m > 0.0 {
                s = s.max((a - b).abs() / m);
            }
        }
    }
    s
}

/// `Σ_{|n|≤m} e^{inδ}` in closed form.
fn dirichlet(delta: f64, m: usize) -> f64 {
    let s = (0.5 * delta).sin();
    if s.abs() < 1e-12 {
        (2 * m + 1) as f64
    } else {
        ((m as f64 + 0.5) * delta).sin() / s
    }
}

/// In the eigenbasis of `U`, `Σ_n U^{−n}B†BUⁿ` is `G ∘ D` with `G = (BV)†BV`
/// and `D` the Dirichlet kernel in the phase differences.
fn c1_kernel(g: &ComplexMatrix, phases: &[f64], m: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(g.rows(), g.cols(), |j, k| g[(j, k)] * dirichlet(phases[k] - phases[j], m))
}

/// Largest eigenvalue of a positive semidefinite matrix.
fn lambda_max(h: &ComplexMatrix) -> Result<f64> {
    op_norm(&h.hermitian_part())
}

pub fn usmooth_constants(u: &ComplexMatrix, b: &ComplexMatrix, phi_samples: &[Vec<C64>], n_max: usize, z_grid: &[C64]) -> Result<SmoothnessReport> {
    let dec = unitary_eig(u, DEFAULT_CLUSTER_TOL)?;
    usmooth_constants_with(&dec, u, b, phi_samples, n_max, z_grid)
}

pub fn usmooth_constants_with(
    dec: &SpectralDecomposition,
    u: &ComplexMatrix,
    b: &ComplexMatrix,
    phi_samples: &[Vec<C64>],
    n_max: usize,
    z_grid: &[C64],
) -> Result<SmoothnessReport> {
    let n = u.rows();
    if !u.is_square() || b.cols() != n {
        return Err(Error::DimensionMismatch(format!("B has {} columns, U is {n}×{n}", b.cols())));
    }
    if n_max < MIN_N_MAX {
        return Err(Error::InvalidArgument(format!("n_max must be at least {MIN_N_MAX}, got {n_max}")));
    }
    if z_grid.iter().any(|z| !(z.norm() < 1.0)) {
        return Err(Error::InvalidArgument("z grid must lie in the open unit disc".into()));
    }
    if phi_samples.iter().any(|v| v.len() != n) {
        return Err(Error::DimensionMismatch("sample vectors must match U".into()));
    }
    let v = dec.vectors();
    let bv = b.matmul(v);
    let g = bv.adj_mul(&bv);

    let k_full = c1_kernel(&g, &dec.phases, n_max);
    let c1_truncated = lambda_max(&k_full)? / (2.0 * PI);
    let c1_half = lambda_max(&c1_kernel(&g, &dec.phases, n_max / 2))? / (2.0 * PI);
    let c1_growth = if c1_half > 0.0 { c1_truncated / c1_half } else { 1.0 };
    let c1 = (c1_growth <= C1_GROWTH_LIMIT).then_some(c1_truncated);
    let c1_sampled = phi_samples
        .iter()
        .map(|psi| {
            let y = v.adj_mul_vec(psi);
            let nn = y.iter().map(|c| c.norm_sqr()).sum::<f64>();
            let ky = k_full.mul_vec(&y);
            let q: C64 = y.iter().zip(&ky).map(|(a, b)| a.conj() * b).sum();
            if nn > 0.0 {
                q.re / nn / (2.0 * PI)
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);

    // C₂ and C₅ through the resolvent. With R = (1 − zU†)^{−1} and Y = RB†,
    // Re((1 + zU†)R) = R + R† − 1, so B·Re(·)·B† = BY + (BY)† − BB†.
    let ud = u.adjoint();
    let bd = b.adjoint();
    let bbd = b.matmul(&bd);
    let (mut c2, mut c5) = (0.0f64, 0.0f64);
    for &z in z_grid {
        let lu = LuFactor::new(&ud.scale(-z).add_identity(C64::new(1.0, 0.0)))?;
        let y = lu.solve_mat(&bd);
        let by = b.matmul(&y);
        // Largest |eigenvalue| of a Hermitian form is its operator norm.
        let re_form = by.add(&by.adjoint()).sub(&bbd).hermitian_part();
        c2 = c2.max(op_norm(&re_form)? / (2.0 * PI));
        c5 = c5.max((1.0 - z.norm_sqr()) * op_norm(&y)?.powi(2) / (2.0 * PI));
    }

    // C₃ from ‖BE‖ with E restricted to its range, C₄ from ‖E B†‖ with the
    // assembled projector.
    let arcs = dyadic_arcs(n);
    let (mut c3, mut c4) = (0.0f64, 0.0f64);
    for arc in &arcs {
        let idx = crate::mourre::arc_indices(dec, arc);
        if idx.is_empty() {
            continue;
        }
        c3 = c3.max(op_norm(&bv.select_cols(&idx))?.powi(2) / arc.length());
        let p = spectral_projector(dec, arc).matrix;
        c4 = c4.max(op_norm(&p.matmul(&bd))?.powi(2) / arc.length());
    }

    let agreement_spread = relative_spread(&[c1_truncated, c3, c4, c5]);
    Ok(SmoothnessReport { c1, c1_truncated, c1_growth, c1_sampled, c2, c3, c4, c5, n_max, z_grid_size: z_grid.len(), arc_count: arcs.len(), agreement_spread })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_unit_vector, random_unitary};

    #[test]
    fn zero_b_gives_zero_constants() {
        let u = random_unitary(16, 1);
        let r = usmooth_constants(&u, &ComplexMatrix::zeros(16, 16), &[random_unit_vector(16, 2)], 32, &default_smoothness_z_grid()).unwrap();
        for c in [r.c1_truncated, r.c1_sampled, r.c2, r.c3, r.c4, r.c5] {
            assert_eq!(c, 0.0);
        }
    }

    #[test]
    fn discrete_spectrum_with_identity_b_diverges() {
        let u = random_unitary(12, 5);
        let r = usmooth_constants(&u, &ComplexMatrix::identity(12), &[], 64, &default_smoothness_z_grid()).unwrap();
        assert!(r.c1.is_none());
        assert!((r.c1_growth - 129.0 / 65.0).abs() < 1e-9);
    }

    #[test]
    fn dirichlet_closed_form() {
        for &d in &[0.3, -1.2, 2.9] {
            let s: f64 = (-5i32..=5).map(|n| (n as f64 * d).cos()).sum();
            assert!((dirichlet(d, 5) - s).abs() < 1e-12);
        }
    }

    #[test]
    fn dyadic_family_shape() {
        let arcs = dyadic_arcs(128);
        assert_eq!(arcs.len(), 8 + 16 + 32 + 64 + 128);
        assert!(arcs.iter().all(|a| a.length() > 0.0));
    }
}
