use serde::{Deserialize, Serialize};

use super::phases::PhaseTriple;
use super::scenario::FloquetScenario;
use crate::error::{Error, Result};
use crate::lattice::{dft_matrix, hamiltonian_op, Fft, GridBasis, InteriorWeight};
use crate::linalg::{herm_eig, op_norm, ComplexMatrix, C64};

/// Grid data and the `H_ω` eigenbasis, built once per basis and shared by
/// every free and perturbed propagation on it.
#[derive(Clone, Debug)]
pub struct FreeSystem {
    basis: GridBasis,
    x: Vec<f64>,
    p: Vec<f64>,
    fft: Fft,
    energies: Vec<f64>,
    modes: ComplexMatrix,
}

impl FreeSystem {
    pub fn new(basis: &GridBasis) -> Result<Self> {
        let (energies, modes) = herm_eig(&hamiltonian_op(basis), 1e-14)?;
        Ok(Self { basis: basis.clone(), x: basis.points(), p: basis.momenta(), fft: basis.fft(), energies, modes })
    }

    pub fn basis(&self) -> &GridBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.n_points
    }

    pub fn points(&self) -> &[f64] {
        &self.x
    }

    pub fn momenta(&self) -> &[f64] {
        &self.p
    }

    pub fn fft(&self) -> &Fft {
        &self.fft
    }

    /// Eigenvalues of the grid `H_ω`, ascending.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn modes(&self) -> &ComplexMatrix {
        &self.modes
    }

    /// `e^{−iH_ω t}`
    pub fn oscillator_evolution(&self, t: f64) -> ComplexMatrix {
        let ph: Vec<C64> = self.energies.iter().map(|&l| C64::from_polar(1.0, -l * t)).collect();
        self.modes.scale_cols(&ph).mul_adj(&self.modes)
    }

    /// `e^{−iH_ω t} M` through the eigenbasis, cheap for thin `M`.
    pub fn apply_oscillator(&self, t: f64, m: &ComplexMatrix) -> ComplexMatrix {
        let ph: Vec<C64> = self.energies.iter().map(|&l| C64::from_polar(1.0, -l * t)).collect();
        self.modes.matmul(&self.modes.adj_mul(m).scale_rows(&ph))
    }

    /// `(F e^{−iH_ω h} F†)ᵀ`, the oscillator step in momentum representation,
    /// transposed for right-multiplication of row-stored states.
    pub fn momentum_step_transposed(&self, h: f64) -> ComplexMatrix {
        let g = self.oscillator_evolution(h);
        let f = dft_matrix(self.dim());
        f.matmul(&g).mul_adj(&f).transpose()
    }

    fn drive_factors(&self, ph: &PhaseTriple) -> (Vec<C64>, Vec<C64>, C64) {
        let w = self.basis.omega;
        let dx = self.x.iter().map(|&x| C64::from_polar(1.0, -ph.phi1 * x)).collect();
        let dp = self.p.iter().map(|&p| C64::from_polar(1.0, ph.phi2 * p / w)).collect();
        (dx, dp, C64::from_polar(1.0, -ph.psi))
    }

    /// Row-stored states `ψ ← e^{−iφ₁x} e^{iφ₂p/ω} e^{−iψ} ψ`.
    pub fn drive_rows(&self, ph: &PhaseTriple, rows: &mut ComplexMatrix) {
        let (dx, dp, g) = self.drive_factors(ph);
        self.fft.apply_momentum_diag_to_rows(&dp, rows);
        for r in 0..rows.rows() {
            rows.row_mut(r).iter_mut().zip(&dx).for_each(|(z, d)| *z *= d * g);
        }
    }

    /// Inverse of [`Self::drive_rows`].
    pub fn drive_rows_adjoint(&self, ph: &PhaseTriple, rows: &mut ComplexMatrix) {
        let (dx, dp, g) = self.drive_factors(ph);
        for r in 0..rows.rows() {
            rows.row_mut(r).iter_mut().zip(&dx).for_each(|(z, d)| *z *= (d * g).conj());
        }
        let dpc: Vec<C64> = dp.iter().map(|z| z.conj()).collect();
        self.fft.apply_momentum_diag_to_rows(&dpc, rows);
    }

    /// `U₀(t) M` for the phases of time `ph.t`.
    pub fn apply_propagator(&self, ph: &PhaseTriple, m: &ComplexMatrix) -> ComplexMatrix {
        let mut rows = self.apply_oscillator(ph.t, m).transpose();
        self.drive_rows(ph, &mut rows);
        rows.transpose()
    }

    /// `U₀(t)† M`
    pub fn apply_propagator_adjoint(&self, ph: &PhaseTriple, m: &ComplexMatrix) -> ComplexMatrix {
        let mut rows = m.transpose();
        self.drive_rows_adjoint(ph, &mut rows);
        self.apply_oscillator(-ph.t, &rows.transpose())
    }

    /// `U₀(t) = e^{−iφ₁x} e^{iφ₂p/ω} e^{−iH_ω t − iψ}`
    pub fn propagator(&self, ph: &PhaseTriple) -> ComplexMatrix {
        let mut rows = self.oscillator_evolution(ph.t).transpose();
        self.drive_rows(ph, &mut rows);
        rows.transpose()
    }

    /// `p M` column by column.
    pub fn apply_momentum(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let d: Vec<C64> = self.p.iter().map(|&p| C64::new(p, 0.0)).collect();
        let mut out = m.clone();
        self.fft.apply_momentum_diag_to_columns(&d, &mut out);
        out
    }

    /// `x M`
    pub fn apply_position(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let d: Vec<C64> = self.x.iter().map(|&x| C64::new(x, 0.0)).collect();
        m.scale_rows(&d)
    }

    pub fn apply_observable(&self, o: Observable, m: &ComplexMatrix) -> ComplexMatrix {
        match o {
            Observable::X => self.apply_position(m),
            Observable::P => self.apply_momentum(m),
        }
    }

    /// `Y† O Y`
    pub fn compress_observable(&self, o: Observable, y: &ComplexMatrix) -> ComplexMatrix {
        y.adj_mul(&self.apply_observable(o, y)).hermitian_part()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Observable {
    X,
    P,
}

impl std::str::FromStr for Observable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(Self::X),
            "p" => Ok(Self::P),
            _ => Err(Error::InvalidArgument(format!("observable must be x or p, got `{s}`"))),
        }
    }
}

/// A real multiple of `x` or `p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledObservable {
    pub which: Observable,
    pub scale: f64,
}

impl ScaledObservable {
    pub fn matrix(&self, basis: &GridBasis) -> ComplexMatrix {
        let m = match self.which {
            Observable::X => crate::lattice::position_op(basis),
            Observable::P => crate::lattice::momentum_op(basis),
        };
        m.scale_real(self.scale)
    }

    pub fn compress(&self, fs: &FreeSystem, y: &ComplexMatrix) -> ComplexMatrix {
        fs.compress_observable(self.which, y).scale_real(self.scale)
    }
}

/// Generator with `U₀(T)† A U₀(T) − A = I` at resonance: `A₁ = −p/φ₁(T)` or
/// `A₂ = −ωx/φ₂(T)`. The sign of `A₁` follows from
/// `U₀(t)†pU₀(t) = −xω sin ωt + p cos ωt − φ₁(t)`.
pub fn translation_generator(ph: &PhaseTriple, omega: f64, which: Observable) -> Result<ScaledObservable> {
    let (phi, scale) = match which {
        Observable::P => (ph.phi1, -1.0 / ph.phi1),
        Observable::X => (ph.phi2, -omega / ph.phi2),
    };
    if phi.abs() < 1e-8 {
        return Err(Error::InvalidArgument(format!("phase for {which:?} vanishes at t = {}; no translation generator", ph.t)));
    }
    Ok(ScaledObservable { which, scale })
}

pub fn free_propagator(scenario: &FloquetScenario, t: f64) -> Result<ComplexMatrix> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("time must be nonnegative, got {t}")));
    }
    let fs = FreeSystem::new(&scenario.basis)?;
    Ok(fs.propagator(&scenario.phases(t)?))
}

/// Interior residuals of the Heisenberg evolution of `x` or `p`, for the
/// affine right-hand side and for the same expression with the constant
/// offset negated (kept as a sign diagnostic).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergResidual {
    pub residual: f64,
    pub flipped_offset_residual: f64,
}

/// `U₀(t)†xU₀(t) = x cos ωt + (p/ω) sin ωt − φ₂/ω` and
/// `U₀(t)†pU₀(t) = −xω sin ωt + p cos ωt − φ₁`, compressed to `frame`.
pub fn heisenberg_check(fs: &FreeSystem, ph: &PhaseTriple, which: Observable, frame: &ComplexMatrix) -> Result<HeisenbergResidual> {
    let w = fs.basis().omega;
    let (s, c) = (w * ph.t).sin_cos();
    let y = fs.apply_propagator(ph, frame);
    let lhs = fs.compress_observable(which, &y);
    let xc = fs.compress_observable(Observable::X, frame);
    let pc = fs.compress_observable(Observable::P, frame);
    let (affine, offset) = match which {
        Observable::X => (xc.scale_real(c).add(&pc.scale_real(s / w)), -ph.phi2 / w),
        Observable::P => (xc.scale_real(-w * s).add(&pc.scale_real(c)), -ph.phi1),
    };
    let base = lhs.sub(&affine);
    let residual = op_norm(&base.add_identity(C64::new(-offset, 0.0)))?;
    let flipped_offset_residual = op_norm(&base.add_identity(C64::new(offset, 0.0)))?;
    Ok(HeisenbergResidual { residual, flipped_offset_residual })
}

/// Residual on the oscillator window at time `t`.
pub fn heisenberg_residual(scenario: &FloquetScenario, t: f64, which: Observable) -> Result<f64> {
    let fs = FreeSystem::new(&scenario.basis)?;
    let frame = InteriorWeight::oscillator(&scenario.basis).frame()?;
    Ok(heisenberg_check(&fs, &scenario.phases(t)?, which, &frame)?.residual)
}

/// `‖W†(U₀(t)† A U₀(t) − A − I)W‖` for a translation generator `A`.
pub fn exact_commutator_residual(fs: &FreeSystem, ph: &PhaseTriple, a: &ScaledObservable, frame: &ComplexMatrix) -> Result<f64> {
    let y = fs.apply_propagator(ph, frame);
    let m = a.compress(fs, &y).sub(&a.compress(fs, frame)).add_identity(C64::new(-1.0, 0.0));
    op_norm(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::FunctionDesc;
    use crate::propagator::FieldSpec;
    use std::f64::consts::PI;

    fn scenario(drive: FunctionDesc, n: usize) -> FloquetScenario {
        let basis = GridBasis::new(n, 8.0, 1.0).unwrap();
        FloquetScenario::new(basis, FieldSpec::new(drive, 2.0 * PI).unwrap(), None, 64, 6).unwrap()
    }

    #[test]
    fn identity_at_time_zero_and_unitary() {
        let s = scenario(FunctionDesc::Sin { a: 1.0, b: 1.0 }, 64);
        let u0 = free_propagator(&s, 0.0).unwrap();
        assert!(u0.sub(&ComplexMatrix::identity(64)).max_abs() < 1e-12);
        let u = free_propagator(&s, 1.3).unwrap();
        assert!(u.unitary_defect() < 1e-10);
    }

    #[test]
    fn thin_and_dense_paths_agree() {
        let s = scenario(FunctionDesc::Cos { a: 0.7, b: 1.0 }, 64);
        let fs = FreeSystem::new(&s.basis).unwrap();
        let ph = s.phases(2.1).unwrap();
        let u = fs.propagator(&ph);
        let w = crate::linalg::random::random_matrix(64, 3, 1);
        assert!(fs.apply_propagator(&ph, &w).sub(&u.matmul(&w)).max_abs() < 1e-11);
        assert!(fs.apply_propagator_adjoint(&ph, &w).sub(&u.adj_mul(&w)).max_abs() < 1e-11);
    }

    #[test]
    fn generator_signs() {
        let ph = PhaseTriple { phi1: 2.0, phi2: -PI, psi: 0.0, t: 2.0 * PI, quadrature_error: 0.0 };
        assert_eq!(translation_generator(&ph, 1.0, Observable::P).unwrap().scale, -0.5);
        assert_eq!(translation_generator(&ph, 1.0, Observable::X).unwrap().scale, 1.0 / PI);
        let zero = PhaseTriple::zero();
        assert!(translation_generator(&zero, 1.0, Observable::X).is_err());
    }
}
