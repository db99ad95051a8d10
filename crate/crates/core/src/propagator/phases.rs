use std::cell::RefCell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::quadrature::adaptive_simpson;
use crate::error::{Error, Result};
use crate::lattice::FunctionDesc;

pub const DEFAULT_PHASE_TOL: f64 = 1e-10;

/// A `T`-periodic real drive `E(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawField", deny_unknown_fields)]
pub struct FieldSpec {
    pub drive: FunctionDesc,
    pub period: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    drive: FunctionDesc,
    period: f64,
}

impl TryFrom<RawField> for FieldSpec {
    type Error = Error;
    fn try_from(r: RawField) -> Result<Self> {
        FieldSpec::new(r.drive, r.period)
    }
}

impl FieldSpec {
    /// Checks `T > 0` and `|E(t+T) − E(t)| ≤ 1e−12` on a probe grid.
    pub fn new(drive: FunctionDesc, period: f64) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidArgument(format!("period must be positive, got {period}")));
        }
        let scale = (0..64).map(|k| drive.eval(k as f64 * period / 64.0).abs()).fold(1.0, f64::max);
        for k in 0..64 {
            let t = k as f64 * period / 64.0 + 0.123 * period / 64.0;
            let gap = (drive.eval(t + period) - drive.eval(t)).abs();
            if !(gap <= 1e-12 * scale) {
                return Err(Error::InvalidArgument(format!("drive `{drive}` is not {period}-periodic (gap {gap:.2e} at t = {t})")));
            }
        }
        Ok(Self { drive, period })
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.drive.eval(t)
    }

    pub fn omega0(&self) -> f64 {
        2.0 * PI / self.period
    }
}

/// `φ₁(t)`, `φ₂(t)`, `ψ(t)` of the closed-form free propagator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseTriple {
    pub phi1: f64,
    pub phi2: f64,
    pub psi: f64,
    pub t: f64,
    pub quadrature_error: f64,
}

impl PhaseTriple {
    pub fn zero() -> Self {
        Self { phi1: 0.0, phi2: 0.0, psi: 0.0, t: 0.0, quadrature_error: 0.0 }
    }
}

/// `φ₁ = ∫₀ᵗ E(τ)cos(ω(τ−t))dτ`, `φ₂ = −∫₀ᵗ E(τ)sin(ω(τ−t))dτ` and
/// `ψ = −½∫₀ᵗ(φ₁² − φ₂²)`. The first two are rotations of
/// `(∫E cos ωτ, ∫E sin ωτ)`, so only those two integrals are accumulated.
pub fn phase_functions(field: &FieldSpec, omega: f64, t: f64, tol: f64) -> Result<PhaseTriple> {
    Ok(phase_table(field, omega, &[t], tol)?[0])
}

fn rotate(omega: f64, t: f64, c: f64, s: f64) -> (f64, f64) {
    let (sn, cs) = (omega * t).sin_cos();
    (cs * c + sn * s, sn * c - cs * s)
}

/// Phases at each of the non-decreasing `times`, accumulated piece by piece so
/// that a whole propagation grid costs about as much as its last point.
pub fn phase_table(field: &FieldSpec, omega: f64, times: &[f64], tol: f64) -> Result<Vec<PhaseTriple>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("quadrature tolerance must be positive, got {tol}")));
    }
    if times.iter().any(|&t| !(t >= 0.0 && t.is_finite())) {
        return Err(Error::InvalidArgument("phase times must be finite and nonnegative".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("phase times must be non-decreasing".into()));
    }
    let t_end = times.last().copied().unwrap_or(0.0);
    let max_piece = field.period / 8.0;
    let zero_drive = field.drive.is_zero();

    let (mut c, mut s, mut psi, mut err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut t_prev = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if !zero_drive && t > t_prev {
            let pieces = ((t - t_prev) / max_piece).ceil().max(1.0) as usize;
            let h = (t - t_prev) / pieces as f64;
            for j in 0..pieces {
                let a = t_prev + j as f64 * h;
                let b = if j + 1 == pieces { t } else { a + h };
                // Quarter budgets leave room for the inner error of the ψ integrand.
                let piece_tol = 0.25 * tol * (b - a) / t_end;
                let (dcs, e1) = step_cs(field, omega, a, b, piece_tol)?;
                let (dpsi, e2) = step_psi(field, omega, a, b, c, s, piece_tol)?;
                c += dcs[0];
                s += dcs[1];
                psi += dpsi;
                err += e1 + e2;
            }
        }
        t_prev = t;
        let (phi1, phi2) = rotate(omega, t, c, s);
        if err > tol {
            return Err(Error::QuadratureFailure(format!("phase error estimate {err:.2e} exceeds {tol:.1e}")));
        }
        out.push(PhaseTriple { phi1, phi2, psi, t, quadrature_error: err });
    }
    Ok(out)
}

fn step_cs(field: &FieldSpec, omega: f64, a: f64, b: f64, tol: f64) -> Result<([f64; 2], f64)> {
    adaptive_simpson(
        &|tau: f64| {
            let e = field.eval(tau);
            let (sn, cs) = (omega * tau).sin_cos();
            [e * cs, e * sn]
        },
        a,
        b,
        tol,
    )
}

/// `−½∫_a^b (φ₁² − φ₂²)` with the inner phases integrated from `a` at a ten
/// times tighter tolerance.
fn step_psi(field: &FieldSpec, omega: f64, a: f64, b: f64, c_a: f64, s_a: f64, tol: f64) -> Result<(f64, f64)> {
    let inner_failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner_err = RefCell::new(0.0f64);
    let integrand = |tau: f64| {
        let (d, e) = match step_cs(field, omega, a, tau, tol / 10.0) {
            Ok(v) => v,
            Err(err) => {
                inner_failure.borrow_mut().get_or_insert(err);
                ([f64::NAN; 2], 0.0)
            }
        };
        let mut ie = inner_err.borrow_mut();
        *ie = ie.max(e);
        let (p1, p2) = rotate(omega, tau, c_a + d[0], s_a + d[1]);
        [-0.5 * (p1 * p1 - p2 * p2)]
    };
    let res = adaptive_simpson(&integrand, a, b, tol);
    if let Some(e) = inner_failure.into_inner() {
        return Err(e);
    }
    let (v, e) = res?;
    // Inner errors perturb φ by at most `ie`, hence φ² by about 2|φ|·ie.
    let phi_scale = (c_a.abs() + s_a.abs() + 1.0) * 2.0;
    Ok((v[0], e + inner_err.into_inner() * phi_scale * (b - a)))
}
