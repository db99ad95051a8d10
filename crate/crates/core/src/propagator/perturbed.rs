//! One-period propagator with a bounded potential.
//!
//! The midpoint-exponential interaction-picture step
//! `Ω_{k+1} = exp(−iΔt W(m_k)) Ω_k` with `W(t) = U₀(t)† V U₀(t)` equals
//! `U₀(m_k)† e^{−iΔtV} U₀(m_k) Ω_k` exactly, so `U(T) = U₀(T)Ω(T)` factors into
//! free legs `U₀(b)U₀(a)†` between midpoints and diagonal kicks `e^{−iΔtV}`.
//! Free legs are applied to row-stored states: every diagonal factor is an
//! elementwise row scaling, the momentum phases are row FFTs, and the
//! oscillator step is one right-multiplication.

use super::free::FreeSystem;
use super::phases::{phase_table, PhaseTriple, DEFAULT_PHASE_TOL};
use super::scenario::{FloquetScenario, MIN_TIME_STEPS};
use crate::error::{Error, Result};
use crate::lattice::sample;
use crate::linalg::{expm_skew, ComplexMatrix, C64};

fn check_steps(scenario: &FloquetScenario) -> Result<()> {
    if scenario.time_steps < MIN_TIME_STEPS {
        return Err(Error::InvalidArgument(format!("time_steps must be at least {MIN_TIME_STEPS}, got {}", scenario.time_steps)));
    }
    Ok(())
}

/// Precomputed pieces for stepping a scenario.
pub struct Stepper<'a> {
    fs: &'a FreeSystem,
    kick: Vec<C64>,
    steps: usize,
    dt: f64,
    /// Phases at `t_0, m_0, t_1, m_1, …, t_K` (`2K + 1` entries).
    phases: Vec<PhaseTriple>,
}

impl<'a> Stepper<'a> {
    pub fn new(fs: &'a FreeSystem, scenario: &FloquetScenario) -> Result<Self> {
        check_steps(scenario)?;
        let v = sample(fs.basis(), scenario.potential()?)?;
        let steps = scenario.time_steps;
        let dt = scenario.period() / steps as f64;
        let kick = v.iter().map(|&x| C64::from_polar(1.0, -dt * x)).collect();
        let times: Vec<f64> = (0..=2 * steps).map(|j| j as f64 * dt / 2.0).collect();
        let phases = phase_table(&scenario.field, scenario.omega(), &times, DEFAULT_PHASE_TOL)?;
        Ok(Self { fs, kick, steps, dt, phases })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Phases at node `t_k = kΔt`.
    pub fn node_phases(&self, k: usize) -> &PhaseTriple {
        &self.phases[2 * k]
    }

    fn midpoint_phases(&self, k: usize) -> &PhaseTriple {
        &self.phases[2 * k + 1]
    }

    /// `rows ← rows · (U₀(b)U₀(a)†)ᵀ`, i.e. each row state moves from `a` to `b`.
    fn free_leg(&self, a: &PhaseTriple, b: &PhaseTriple, g_hat_t: &ComplexMatrix, rows: &mut ComplexMatrix) {
        let w = self.fs.basis().omega;
        let x = self.fs.points();
        let p = self.fs.momenta();
        let fft = self.fs.fft();
        let gin = C64::from_polar(1.0, a.psi);
        let dx_in: Vec<C64> = x.iter().map(|&x| C64::from_polar(1.0, a.phi1 * x) * gin).collect();
        let dp_in: Vec<C64> = p.iter().map(|&p| C64::from_polar(1.0, -a.phi2 * p / w)).collect();
        let gout = C64::from_polar(1.0, -b.psi);
        let dx_out: Vec<C64> = x.iter().map(|&x| C64::from_polar(1.0, -b.phi1 * x) * gout).collect();
        let dp_out: Vec<C64> = p.iter().map(|&p| C64::from_polar(1.0, b.phi2 * p / w)).collect();

        scale_rows_elementwise(rows, &dx_in);
        fft.forward_rows(rows);
        scale_rows_elementwise(rows, &dp_in);
        *rows = rows.matmul(g_hat_t);
        scale_rows_elementwise(rows, &dp_out);
        fft.inverse_rows(rows);
        scale_rows_elementwise(rows, &dx_out);
    }

    fn kick_rows(&self, rows: &mut ComplexMatrix) {
        scale_rows_elementwise(rows, &self.kick);
    }

    /// Propagates row-stored states from `0` to `T`, fusing consecutive free
    /// legs between midpoints.
    pub fn propagate_rows(&self, rows: &mut ComplexMatrix) {
        let k = self.steps;
        let half = self.fs.momentum_step_transposed(self.dt / 2.0);
        let full = self.fs.momentum_step_transposed(self.dt);
        self.free_leg(self.node_phases(0), self.midpoint_phases(0), &half, rows);
        self.kick_rows(rows);
        for j in 1..k {
            self.free_leg(self.midpoint_phases(j - 1), self.midpoint_phases(j), &full, rows);
            self.kick_rows(rows);
        }
        self.free_leg(self.midpoint_phases(k - 1), self.node_phases(k), &half, rows);
    }

    /// `rows ← rows · (U(T)†)ᵀ`: the legs of [`Self::propagate_rows`] in
    /// reverse order, each inverted.
    pub fn propagate_rows_adjoint(&self, rows: &mut ComplexMatrix) {
        let k = self.steps;
        let half = self.fs.momentum_step_transposed(-self.dt / 2.0);
        let full = self.fs.momentum_step_transposed(-self.dt);
        let kick_adj: Vec<C64> = self.kick.iter().map(|z| z.conj()).collect();
        self.free_leg(self.node_phases(k), self.midpoint_phases(k - 1), &half, rows);
        scale_rows_elementwise(rows, &kick_adj);
        for j in (1..k).rev() {
            self.free_leg(self.midpoint_phases(j), self.midpoint_phases(j - 1), &full, rows);
            scale_rows_elementwise(rows, &kick_adj);
        }
        self.free_leg(self.midpoint_phases(0), self.node_phases(0), &half, rows);
    }

    /// Propagates row-stored states and hands `U(t_k)·states` (still as rows)
    /// to `visit(k, rows)` at every node `t_k`, including `k = 0` and `k = K`.
    pub fn propagate_rows_visiting(&self, rows: &mut ComplexMatrix, mut visit: impl FnMut(usize, &ComplexMatrix) -> Result<()>) -> Result<()> {
        let half = self.fs.momentum_step_transposed(self.dt / 2.0);
        visit(0, rows)?;
        for j in 0..self.steps {
            self.free_leg(self.node_phases(j), self.midpoint_phases(j), &half, rows);
            self.kick_rows(rows);
            self.free_leg(self.midpoint_phases(j), self.node_phases(j + 1), &half, rows);
            visit(j + 1, rows)?;
        }
        Ok(())
    }
}

fn scale_rows_elementwise(rows: &mut ComplexMatrix, d: &[C64]) {
    for r in 0..rows.rows() {
        rows.row_mut(r).iter_mut().zip(d).for_each(|(z, s)| *z *= s);
    }
}

/// `(U_T, Ω_T)` with `U_T = U₀(T)Ω_T` by midpoint-exponential stepping.
pub fn perturbed_floquet(scenario: &FloquetScenario) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let fs = FreeSystem::new(&scenario.basis)?;
    perturbed_floquet_with(&fs, scenario)
}

/// [`perturbed_floquet`] reusing a prepared [`FreeSystem`].
pub fn perturbed_floquet_with(fs: &FreeSystem, scenario: &FloquetScenario) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let stepper = Stepper::new(fs, scenario)?;
    // Rows of the identity are the basis states; the propagated rows are Uᵀ.
    let mut rows = ComplexMatrix::identity(fs.dim());
    stepper.propagate_rows(&mut rows);
    let u = rows.transpose();
    let omega = fs.apply_propagator_adjoint(stepper.node_phases(stepper.steps()), &u);
    Ok((u, omega))
}

/// `U(t_k) Y` at every node `t_k = kΔt`, passed to `visit(k, t_k, U(t_k)Y)`.
pub fn propagate_frame(
    fs: &FreeSystem,
    scenario: &FloquetScenario,
    frame: &ComplexMatrix,
    mut visit: impl FnMut(usize, f64, &ComplexMatrix) -> Result<()>,
) -> Result<()> {
    let stepper = Stepper::new(fs, scenario)?;
    let dt = stepper.dt();
    let mut rows = frame.transpose();
    stepper.propagate_rows_visiting(&mut rows, |k, r| visit(k, k as f64 * dt, &r.transpose()))
}

/// `U(T)Y` for a thin frame `Y`.
pub fn propagate_frame_to_period(fs: &FreeSystem, scenario: &FloquetScenario, frame: &ComplexMatrix) -> Result<ComplexMatrix> {
    let stepper = Stepper::new(fs, scenario)?;
    let mut rows = frame.transpose();
    stepper.propagate_rows(&mut rows);
    Ok(rows.transpose())
}

/// `U(T)†Y` for a thin frame `Y`.
pub fn propagate_frame_adjoint(fs: &FreeSystem, scenario: &FloquetScenario, frame: &ComplexMatrix) -> Result<ComplexMatrix> {
    let stepper = Stepper::new(fs, scenario)?;
    let mut rows = frame.transpose();
    stepper.propagate_rows_adjoint(&mut rows);
    Ok(rows.transpose())
}

/// Same scheme built literally: dense `W(m_k)` and `expm_skew` per step.
/// Cubic in `N` per step with a large constant; meant for small grids.
pub fn perturbed_floquet_reference(scenario: &FloquetScenario) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_steps(scenario)?;
    let fs = FreeSystem::new(&scenario.basis)?;
    let v = sample(&scenario.basis, scenario.potential()?)?;
    let vd: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
    let k = scenario.time_steps;
    let dt = scenario.period() / k as f64;
    let mids: Vec<f64> = (0..k).map(|j| (j as f64 + 0.5) * dt).collect();
    let phases = phase_table(&scenario.field, scenario.omega(), &mids, DEFAULT_PHASE_TOL)?;
    let mut omega = ComplexMatrix::identity(fs.dim());
    for ph in &phases {
        let u0 = fs.propagator(ph);
        let w = u0.adj_mul(&u0.scale_rows(&vd)).hermitian_part();
        omega = expm_skew(&w, -dt)?.matmul(&omega);
    }
    let u = fs.propagator(&scenario.phases_at_period()?).matmul(&omega);
    Ok((u, omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{FunctionDesc, GridBasis};
    use crate::linalg::op_norm;
    use crate::propagator::FieldSpec;
    use std::f64::consts::PI;

    fn scenario(v: Option<FunctionDesc>, n: usize, steps: usize) -> FloquetScenario {
        let basis = GridBasis::new(n, 8.0, 1.0).unwrap();
        FloquetScenario::new(basis, FieldSpec::new(FunctionDesc::Sin { a: 1.0, b: 1.0 }, 2.0 * PI).unwrap(), v, steps, 6).unwrap()
    }

    #[test]
    fn split_kick_matches_dense_reference() {
        let s = scenario(Some(FunctionDesc::Gaussian { a: 0.3, s: 1.0 }), 64, 32);
        let (u, om) = perturbed_floquet(&s).unwrap();
        let (ur, omr) = perturbed_floquet_reference(&s).unwrap();
        assert!(u.sub(&ur).max_abs() < 1e-9, "{}", u.sub(&ur).max_abs());
        assert!(om.sub(&omr).max_abs() < 1e-9);
        assert!(u.unitary_defect() < 1e-9);
    }

    #[test]
    fn zero_potential_gives_free_propagator() {
        let s = scenario(Some(FunctionDesc::Zero), 64, 16);
        let (u, om) = perturbed_floquet(&s).unwrap();
        assert!(om.sub(&ComplexMatrix::identity(64)).max_abs() < 1e-10);
        let u0 = crate::propagator::free_propagator(&s, s.period()).unwrap();
        assert!(u.sub(&u0).max_abs() < 1e-10);
    }

    #[test]
    fn crude_tail_bound() {
        let s = scenario(Some(FunctionDesc::Gaussian { a: 0.2, s: 1.0 }), 64, 32);
        let (_, om) = perturbed_floquet(&s).unwrap();
        let gap = op_norm(&om.sub(&ComplexMatrix::identity(64))).unwrap();
        assert!(gap <= (s.period() * 0.2f64).exp() - 1.0);
    }

    #[test]
    fn frame_visits_match_full_propagator() {
        let s = scenario(Some(FunctionDesc::Gaussian { a: 0.3, s: 1.0 }), 64, 16);
        let fs = FreeSystem::new(&s.basis).unwrap();
        let y = crate::linalg::random::random_matrix(64, 2, 4);
        let mut last = None;
        let mut count = 0;
        propagate_frame(&fs, &s, &y, |k, _, m| {
            count += 1;
            if k == 16 {
                last = Some(m.clone());
            }
            Ok(())
        })
        .unwrap();
        assert_eq!(count, 17);
        let (u, _) = perturbed_floquet_with(&fs, &s).unwrap();
        assert!(last.unwrap().sub(&u.matmul(&y)).max_abs() < 1e-10);
    }

    #[test]
    fn adjoint_frame_propagation() {
        let s = scenario(Some(FunctionDesc::Gaussian { a: 0.3, s: 1.0 }), 64, 16);
        let fs = FreeSystem::new(&s.basis).unwrap();
        let y = crate::linalg::random::random_matrix(64, 3, 8);
        let (u, _) = perturbed_floquet_with(&fs, &s).unwrap();
        assert!(propagate_frame_adjoint(&fs, &s, &y).unwrap().sub(&u.adj_mul(&y)).max_abs() < 1e-10);
        assert!(propagate_frame_to_period(&fs, &s, &y).unwrap().sub(&u.matmul(&y)).max_abs() < 1e-10);
    }

    #[test]
    fn rejects_missing_potential_and_short_grids() {
        assert!(matches!(perturbed_floquet(&scenario(None, 16, 16)), Err(Error::NoPotential)));
        assert!(perturbed_floquet(&scenario(Some(FunctionDesc::Zero), 16, 8)).is_err());
    }
}
