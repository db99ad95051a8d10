//! The regularised resolvent family `T_ε^±(z)`, `G_ε^± = (T_ε^±)^{−1}`, on an
//! interior frame `W`. `A` is unbounded, so `B(ε) = A − U_εAU_ε†` is only
//! meaningful between interior vectors; every operator below is the `r × r`
//! compression `W†(·)W`, with `U_ε†` entering as `W†U_ε†W`.

use serde::{Deserialize, Serialize};

use super::arc::Arc;
use super::theorem_a::theorem_a_criteria;
use crate::commutator::mollify;
use crate::error::{Error, Result};
use crate::linalg::{expm, op_norm, ComplexMatrix, LuFactor, C64};
use crate::propagator::{propagate_frame_adjoint, FloquetScenario, FreeSystem};

/// `8` radii `1 − 10^{−s}`, `s` evenly spaced in `[1, 4]`, times `16` angles
/// spread over the arc.
pub fn default_z_grid(arc: &Arc) -> Vec<C64> {
    let radii: Vec<f64> = (0..8).map(|k| 1.0 - 10f64.powf(-(1.0 + 3.0 * k as f64 / 7.0))).collect();
    let angles = arc.sample_angles(16);
    radii.iter().flat_map(|&r| angles.iter().map(move |&t| C64::from_polar(r, t))).collect()
}

pub fn default_epsilon_grid() -> Vec<f64> {
    vec![0.4, 0.2, 0.1, 0.05, 0.025]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub epsilon: f64,
    pub z: C64,
    pub plus: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularizedFamilyReport {
    pub epsilon_grid: Vec<f64>,
    pub z_grid: Vec<C64>,
    /// `‖G_ε^+(z)‖`, indexed `[ε][z]`; NaN where the solve failed.
    pub norms_g_plus: Vec<Vec<f64>>,
    pub norms_g_minus: Vec<Vec<f64>>,
    /// `sup ε‖G_ε^+(z)‖` over the grid.
    pub fitted_c_eps: f64,
    /// `sup (1−|z|²)‖G_ε^+(z)‖` over the open disc part of the grid.
    pub fitted_c_z: f64,
    /// Per-ε sups of `ε‖G^+‖` and `(1−|z|²)‖G^+‖`.
    pub c_eps_by_epsilon: Vec<f64>,
    pub c_z_by_epsilon: Vec<f64>,
    /// `sup (1−|z|²)‖G_ε^−(z)‖` per ε.
    pub c_z_minus_by_epsilon: Vec<f64>,
    /// `‖U_ε†e^{−εB(ε)} − U†‖/ε` per ε.
    pub lem1_margins: Vec<f64>,
    /// `sup_z ‖T_ε^+(z) − (1 − zU†)‖/ε` per ε.
    pub limit_margins: Vec<f64>,
    /// Largest LU condition estimate met.
    pub max_condition: f64,
    pub singular_points: Vec<SingularPoint>,
    pub frame_rank: usize,
}

/// Sweeps `G_ε^±(z)` over the grids. `U_ε = U₀(T)Ω_ε(T)` is rebuilt from the
/// mollified potential for each ε; `U = U₀(T)Ω(T)` uses the potential itself.
pub fn regularized_family(
    scenario: &FloquetScenario,
    a: &ComplexMatrix,
    frame: &ComplexMatrix,
    epsilon_grid: &[f64],
    z_grid: &[C64],
) -> Result<RegularizedFamilyReport> {
    let n = scenario.basis.n_points;
    if a.rows() != n || !a.is_square() || frame.rows() != n {
        return Err(Error::DimensionMismatch("generator and frame must match the grid".into()));
    }
    if epsilon_grid.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
        return Err(Error::InvalidArgument("ε grid must lie in (0, 1]".into()));
    }
    if z_grid.iter().any(|z| !(z.norm() <= 1.0)) {
        return Err(Error::InvalidArgument("z grid must lie in the closed unit disc".into()));
    }
    let fs = FreeSystem::new(&scenario.basis)?;
    let potential = scenario.potential.clone().filter(|v| !v.is_zero());
    if potential.is_some() && !theorem_a_criteria(scenario)?.hypothesis_c11.satisfied {
        return Err(Error::InvalidArgument("the potential fails the second-difference hypothesis".into()));
    }
    let r = frame.cols();
    let id = ComplexMatrix::identity(r);

    // W†U†W for the unmollified propagator.
    let adjoint_frame = |s: &FloquetScenario| -> Result<ComplexMatrix> {
        match s.potential.as_ref().filter(|v| !v.is_zero()) {
            Some(_) => propagate_frame_adjoint(&fs, s, frame),
            None => Ok(fs.apply_propagator_adjoint(&s.phases_at_period()?, frame)),
        }
    };
    let u_adj_c = frame.adj_mul(&adjoint_frame(scenario)?);
    let a_c = frame.adj_mul(&a.matmul(frame));

    let mut report = RegularizedFamilyReport {
        epsilon_grid: epsilon_grid.to_vec(),
        z_grid: z_grid.to_vec(),
        norms_g_plus: Vec::new(),
        norms_g_minus: Vec::new(),
        fitted_c_eps: 0.0,
        fitted_c_z: 0.0,
        c_eps_by_epsilon: Vec::new(),
        c_z_by_epsilon: Vec::new(),
        c_z_minus_by_epsilon: Vec::new(),
        lem1_margins: Vec::new(),
        limit_margins: Vec::new(),
        max_condition: 0.0,
        singular_points: Vec::new(),
        frame_rank: r,
    };

    for &eps in epsilon_grid {
        let s_eps = match &potential {
            Some(v) => scenario.with_potential(Some(mollify(&scenario.basis, v, eps)?)),
            None => scenario.clone(),
        };
        let y = adjoint_frame(&s_eps)?;
        let ue_adj_c = frame.adj_mul(&y);
        // W†(A − U_εAU_ε†)W = W†AW − (U_ε†W)†A(U_ε†W)
        let b = a_c.sub(&y.adj_mul(&a.matmul(&y))).hermitian_part();
        let e_minus = expm(&b.scale_real(-eps))?;
        let e_plus_adj = expm(&b.scale_real(eps))?.adjoint();
        let k_plus = ue_adj_c.matmul(&e_minus);
        let k_minus = ue_adj_c.matmul(&e_plus_adj);
        report.lem1_margins.push(op_norm(&k_plus.sub(&u_adj_c))? / eps);

        let (mut gp, mut gm) = (Vec::with_capacity(z_grid.len()), Vec::with_capacity(z_grid.len()));
        let (mut ce, mut cz, mut czm, mut lim) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for &z in z_grid {
            let t_plus = id.sub(&k_plus.scale(z));
            lim = lim.max(op_norm(&t_plus.sub(&id.sub(&u_adj_c.scale(z))))? / eps);
            let np = match invert_norm(&t_plus, &mut report.max_condition) {
                Some(v) => v,
                None => {
                    report.singular_points.push(SingularPoint { epsilon: eps, z, plus: true });
                    f64::NAN
                }
            };
            let nm = if z.norm() == 0.0 {
                // `z̄^{−1}` is undefined at the origin; `G^−(0) = 0` in the limit.
                0.0
            } else {
                let t_minus = id.sub(&k_minus.scale(z.conj().inv()));
                match invert_norm(&t_minus, &mut report.max_condition) {
                    Some(v) => v,
                    None => {
                        report.singular_points.push(SingularPoint { epsilon: eps, z, plus: false });
                        f64::NAN
                    }
                }
            };
            if np.is_finite() {
                ce = ce.max(eps * np);
                if z.norm() < 1.0 {
                    cz = cz.max((1.0 - z.norm_sqr()) * np);
                }
            }
            if nm.is_finite() && z.norm() < 1.0 {
                czm = czm.max((1.0 - z.norm_sqr()) * nm);
            }
            gp.push(np);
            gm.push(nm);
        }
        report.norms_g_plus.push(gp);
        report.norms_g_minus.push(gm);
        report.c_eps_by_epsilon.push(ce);
        report.c_z_by_epsilon.push(cz);
        report.c_z_minus_by_epsilon.push(czm);
        report.limit_margins.push(lim);
        report.fitted_c_eps = report.fitted_c_eps.max(ce);
        report.fitted_c_z = report.fitted_c_z.max(cz);
    }
    Ok(report)
}

fn invert_norm(t: &ComplexMatrix, max_cond: &mut f64) -> Option<f64> {
    let lu = LuFactor::new(t).ok()?;
    let cond = lu.condition_estimate();
    if !cond.is_finite() || cond > 1e14 {
        return None;
    }
    *max_cond = max_cond.max(cond);
    op_norm(&lu.inverse()).ok().filter(|v| v.is_finite())
}

/// `1/(1 − |z|e^{−ε})`, the norm of `(1 − ze^{−ε}U†)^{−1}` for unitary `U`
/// with spectrum filling the circle.
pub fn strict_resolvent_norm(z: C64, eps: f64) -> f64 {
    1.0 / (1.0 - z.norm() * (-eps).exp())
}

/// `ε/(1 − e^{−ε})`, the sup of `ε‖G^+‖` over the closed disc in that case.
pub fn strict_c_eps(eps: f64) -> f64 {
    eps / (1.0 - (-eps).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{FunctionDesc, GridBasis, InteriorWeight};
    use crate::propagator::{translation_generator, FieldSpec, Observable};
    use std::f64::consts::PI;

    fn free_translation() -> (FloquetScenario, ComplexMatrix, ComplexMatrix) {
        let basis = GridBasis::new(128, 12.0, 1.0).unwrap();
        let s = FloquetScenario::new(basis.clone(), FieldSpec::new(FunctionDesc::Sin { a: 1.0, b: 1.0 }, 2.0 * PI).unwrap(), None, 64, 6).unwrap();
        let a = translation_generator(&s.phases_at_period().unwrap(), 1.0, Observable::X).unwrap().matrix(&basis);
        let w = InteriorWeight::oscillator(&basis).frame().unwrap();
        (s, a, w)
    }

    #[test]
    fn origin_gives_identity_and_free_bound_holds() {
        let (s, a, w) = free_translation();
        let z = vec![C64::new(0.0, 0.0), C64::new(0.9, 0.0), C64::from_polar(0.999, 1.0)];
        let r = regularized_family(&s, &a, &w, &[0.1], &z).unwrap();
        assert!((r.norms_g_plus[0][0] - 1.0).abs() < 1e-12);
        for (k, &zk) in z.iter().enumerate() {
            assert!(r.norms_g_plus[0][k] <= strict_resolvent_norm(zk, 0.1) * (1.0 + 1e-6));
        }
        assert!(r.fitted_c_eps <= strict_c_eps(0.1) * (1.0 + 1e-6));
        // B(ε) = I on the frame, so the lem1 margin is (1 − e^{−ε})/ε·‖W†U†W‖.
        assert!(r.lem1_margins[0] <= (1.0 - (-0.1f64).exp()) / 0.1 + 1e-6);
        assert!(r.singular_points.is_empty());
    }

    #[test]
    fn rejects_points_outside_disc() {
        let (s, a, w) = free_translation();
        assert!(regularized_family(&s, &a, &w, &[0.1], &[C64::new(1.5, 0.0)]).is_err());
        assert!(regularized_family(&s, &a, &w, &[0.0], &[C64::new(0.5, 0.0)]).is_err());
    }

    #[test]
    fn default_grid_shape() {
        let g = default_z_grid(&Arc::full());
        assert_eq!(g.len(), 128);
        assert!(g.iter().all(|z| z.norm() < 1.0 && z.norm() >= 0.9 - 1e-12));
    }
}
