//! `U(T)†pU(T) − p` computed directly and through the time integral of the
//! propagated force. With `K₀(τ) = p cos ωτ + ωx sin ωτ`, which is conserved
//! by the free resonant flow, `d/dτ U†K₀U = −cos ωτ·U†(E + ∂_xV)U`, hence
//! `U(T)†pU(T) − p = −φ₁(T) − ∫₀ᵀ cos(ωτ) U(τ)†(∂_xV)U(τ) dτ`.

use super::regularity::potential_derivative;
use crate::error::{Error, Result};
use crate::lattice::InteriorWeight;
use crate::linalg::{op_norm, ComplexMatrix, C64};
use crate::propagator::{cumulative_simpson_weights, propagate_frame, simpson_weights, FloquetScenario, FreeSystem, Observable};

/// Both sides on an interior frame `Y` (`r × r` compressions).
#[derive(Clone, Debug)]
pub struct BtReport {
    /// `Y†(U(T)†pU(T) − p)Y`
    pub direct: ComplexMatrix,
    /// `−φ₁(T)I − Σ_k w_k cos(ωt_k) Y†U(t_k)†(∂_xV)U(t_k)Y`
    pub integral: ComplexMatrix,
    /// `‖direct − integral‖`
    pub interior_gap: f64,
    pub phi1: f64,
    /// `‖direct + φ₁(T)I‖`
    pub drift_norm: f64,
    /// `T·max_k|∂_xV(x_k)|`
    pub drift_bound: f64,
    pub time_steps: usize,
}

fn time_weights(steps: usize, h: f64) -> Vec<f64> {
    if steps.is_multiple_of(2) {
        return simpson_weights(steps, h);
    }
    let mut w = vec![0.0; steps + 1];
    for rule in cumulative_simpson_weights(steps) {
        for (node, c) in rule {
            w[node] += c * h;
        }
    }
    w
}

/// Requires resonance: the conserved `K₀` only exists for `ω₀ = ω`.
pub fn commutator_bt(scenario: &FloquetScenario) -> Result<BtReport> {
    let fs = FreeSystem::new(&scenario.basis)?;
    let frame = InteriorWeight::oscillator(&scenario.basis).frame()?;
    commutator_bt_with(&fs, scenario, &frame)
}

pub fn commutator_bt_with(fs: &FreeSystem, scenario: &FloquetScenario, frame: &ComplexMatrix) -> Result<BtReport> {
    let v = scenario.potential()?;
    if !scenario.is_resonant() {
        return Err(Error::InvalidArgument("the force-integral form needs a resonant drive".into()));
    }
    let dv: Vec<C64> = potential_derivative(&scenario.basis, v, 1)?.iter().map(|&d| C64::new(d, 0.0)).collect();
    let dv_max = dv.iter().fold(0.0f64, |m, d| m.max(d.re.abs()));
    let w = scenario.omega();
    let steps = scenario.time_steps;
    let dt = scenario.period() / steps as f64;
    let weights = time_weights(steps, dt);
    let r = frame.cols();

    let mut force = ComplexMatrix::zeros(r, r);
    let mut y_end = None;
    propagate_frame(fs, scenario, frame, |k, t, y| {
        let m = y.adj_mul(&y.scale_rows(&dv));
        force.axpy(C64::new(weights[k] * (w * t).cos(), 0.0), &m);
        if k == steps {
            y_end = Some(y.clone());
        }
        Ok(())
    })?;
    let y_end = y_end.expect("visitor reaches the final node");
    let phi1 = scenario.phases_at_period()?.phi1;
    let direct = fs.compress_observable(Observable::P, &y_end).sub(&fs.compress_observable(Observable::P, frame));
    let integral = force.hermitian_part().scale_real(-1.0).add_identity(C64::new(-phi1, 0.0));
    let interior_gap = op_norm(&direct.sub(&integral))?;
    let drift_norm = op_norm(&direct.add_identity(C64::new(phi1, 0.0)))?;
    Ok(BtReport { direct, integral, interior_gap, phi1, drift_norm, drift_bound: scenario.period() * dv_max, time_steps: steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{FunctionDesc, GridBasis};
    use crate::propagator::FieldSpec;
    use std::f64::consts::PI;

    fn scenario(v: FunctionDesc) -> FloquetScenario {
        let basis = GridBasis::new(256, 12.0, 1.0).unwrap();
        FloquetScenario::new(basis, FieldSpec::new(FunctionDesc::Cos { a: 1.0, b: 1.0 }, 2.0 * PI).unwrap(), Some(v), 64, 6).unwrap()
    }

    #[test]
    fn zero_potential_gives_constant_shift() {
        let r = commutator_bt(&scenario(FunctionDesc::Zero)).unwrap();
        assert!((r.phi1 - PI).abs() < 1e-9);
        assert!(r.interior_gap < 1e-6, "{}", r.interior_gap);
        assert!(r.drift_norm < 1e-6);
    }

    #[test]
    fn gaussian_potential_agrees_and_obeys_drift_bound() {
        let r = commutator_bt(&scenario(FunctionDesc::Gaussian { a: 0.1, s: 1.0 })).unwrap();
        assert!(r.interior_gap < 1e-3, "{}", r.interior_gap);
        assert!(r.drift_norm <= r.drift_bound + 1e-6);
    }
}
