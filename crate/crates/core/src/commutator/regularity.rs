use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{sample, FunctionDesc, GridBasis, InteriorWeight};
use crate::linalg::tridiagonal_eigensystem;
use crate::propagator::adaptive_simpson;

/// `∂_x^k V` on the grid: analytic when the descriptor has a closed form,
/// otherwise spectral differentiation multiplied by the default interior
/// position window (the periodic extension of a non-periodic tail is noisy at
/// the edges).
pub fn potential_derivative(basis: &GridBasis, v: &FunctionDesc, order: u32) -> Result<Vec<f64>> {
    if order == 0 {
        return sample(basis, v);
    }
    if v.has_analytic_derivative() {
        return basis
            .points()
            .iter()
            .map(|&x| v.derivative(x, order).ok_or_else(|| Error::InvalidArgument(format!("no derivative of order {order} for `{v}`"))))
            .collect();
    }
    let vals = sample(basis, v)?;
    let d = basis.spectral_derivative(&vals, order);
    let w = InteriorWeight::default_for(basis).position_weights();
    Ok(d.iter().zip(&w).map(|(a, b)| a * b).collect())
}

/// `sup_k |∂_x V(x_k)|` with [`potential_derivative`].
pub fn derivative_sup(basis: &GridBasis, v: &FunctionDesc) -> Result<f64> {
    Ok(potential_derivative(basis, v, 1)?.iter().fold(0.0, |m, x| m.max(x.abs())))
}

/// Gauss–Hermite rule for `∫ f(u) e^{−u²} du` (Golub–Welsch).
pub fn gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidArgument("Gauss–Hermite rule needs at least one node".into()));
    }
    let diag = vec![0.0; n];
    let sub: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let (nodes, vecs) = tridiagonal_eigensystem(&diag, &sub)?;
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let weights = vecs.iter().map(|v| sqrt_pi * v[0] * v[0]).collect();
    Ok((nodes, weights))
}

const GH_LADDER: [usize; 4] = [24, 48, 96, 192];
const MOLLIFY_REL_TOL: f64 = 1e-11;

/// `V_ε(x) = ∫ V(x−ετ) e^{−τ²/4} dτ/√(4π)`, tabulated on the grid.
///
/// With `τ = 2u` this is `π^{−1/2}∫ V(x − 2εu) e^{−u²} du`. Closed-form
/// descriptors use Gauss–Hermite rules of growing size until two successive
/// rules agree; tabulated ones have kinks and go through adaptive Simpson on
/// `|u| ≤ 8` instead.
pub fn mollify(basis: &GridBasis, v: &FunctionDesc, epsilon: f64) -> Result<FunctionDesc> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidArgument(format!("mollifier epsilon must lie in (0, 1], got {epsilon}")));
    }
    let xs = basis.points();
    let scale = xs.iter().map(|&x| v.eval(x).abs()).fold(0.0, f64::max).max(1e-300);
    let values = if matches!(v, FunctionDesc::Tabulated { .. } | FunctionDesc::Bump { .. }) {
        let norm = std::f64::consts::PI.sqrt().recip();
        xs.iter()
            .map(|&x| {
                let f = |u: f64| [v.eval(x - 2.0 * epsilon * u) * (-u * u).exp() * norm];
                adaptive_simpson(&f, -8.0, 8.0, MOLLIFY_REL_TOL * scale).map(|(r, _)| r[0])
            })
            .collect::<Result<Vec<f64>>>()?
    } else {
        let apply = |n: usize| -> Result<Vec<f64>> {
            let (nodes, weights) = gauss_hermite(n)?;
            let norm = std::f64::consts::PI.sqrt().recip();
            Ok(xs.iter().map(|&x| nodes.iter().zip(&weights).map(|(u, w)| w * v.eval(x - 2.0 * epsilon * u)).sum::<f64>() * norm).collect())
        };
        let mut prev = apply(GH_LADDER[0])?;
        let mut done = None;
        for &n in &GH_LADDER[1..] {
            let next = apply(n)?;
            let gap = prev.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if gap <= MOLLIFY_REL_TOL * scale {
                done = Some(next);
                break;
            }
            prev = next;
        }
        done.ok_or_else(|| Error::QuadratureFailure(format!("Gauss–Hermite mollification of `{v}` at ε = {epsilon} did not settle")))?
    };
    Ok(FunctionDesc::Tabulated { x0: xs[0], dx: basis.spacing(), values })
}

/// Fitted `c` in `‖V_ε − V‖_∞ ≤ c·ε` over an ε grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MollifierRate {
    /// `(ε, ‖V_ε − V‖_∞)` on the grid points.
    pub gaps: Vec<(f64, f64)>,
    /// `max_ε ‖V_ε − V‖_∞/ε`
    pub fitted_c: f64,
}

pub fn mollifier_rate(basis: &GridBasis, v: &FunctionDesc, eps_grid: &[f64]) -> Result<MollifierRate> {
    let base = sample(basis, v)?;
    let mut gaps = Vec::with_capacity(eps_grid.len());
    for &e in eps_grid {
        let ve = sample(basis, &mollify(basis, v, e)?)?;
        gaps.push((e, base.iter().zip(&ve).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)));
    }
    let fitted_c = gaps.iter().map(|&(e, g)| g / e).fold(0.0, f64::max);
    Ok(MollifierRate { gaps, fitted_c })
}

/// Uniform spatial quadrature grid for the second-difference integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerGrid {
    pub half_width: f64,
    pub points: usize,
}

impl Default for InnerGrid {
    fn default() -> Self {
        Self { half_width: 14.0, points: 4097 }
    }
}

impl InnerGrid {
    fn nodes(&self) -> (Vec<f64>, f64) {
        let h = 2.0 * self.half_width / (self.points - 1) as f64;
        ((0..self.points).map(|k| -self.half_width + k as f64 * h).collect(), h)
    }
}

pub const T_NODES_PER_DECADE: usize = 40;
pub const DEFAULT_T_MIN: f64 = 1e-3;
const C11_NOT_CONVERGED: f64 = 0.05;
const C11_CONVERGED: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularitySeminorm {
    /// `∫_{t_min}^1 g(t) dt/t²` with `g(t) = ∫|V(x−t)+V(x+t)−2V(x)|dx`.
    pub value: f64,
    pub t_min: f64,
    /// Relative change of `value` when `t_min` is halved is below 1%.
    pub converged: bool,
    pub relative_change: f64,
    pub grid: InnerGrid,
    pub t_nodes: usize,
}

/// Spatial `L¹` norm of the centred second difference at shift `t`. Shifts
/// evaluate the descriptor directly: exact for closed forms, linear
/// interpolation for tabulated data.
pub fn second_difference_l1(v: &FunctionDesc, t: f64, grid: &InnerGrid) -> f64 {
    let (xs, h) = grid.nodes();
    let n = xs.len();
    xs.iter()
        .enumerate()
        .map(|(k, &x)| {
            let w = if k == 0 || k + 1 == n { 0.5 } else { 1.0 };
            w * (v.eval(x - t) + v.eval(x + t) - 2.0 * v.eval(x)).abs()
        })
        .sum::<f64>()
        * h
}

fn log_trapezoid(v: &FunctionDesc, t_min: f64, grid: &InnerGrid) -> (f64, usize) {
    let decades = (1.0 / t_min).log10();
    let count = ((T_NODES_PER_DECADE as f64 * decades).ceil() as usize).max(1) + 1;
    let (lo, hi) = (t_min.ln(), 0.0f64);
    let h = (hi - lo) / (count - 1) as f64;
    // dt/t² = (1/t) d(log t)
    let f: Vec<f64> = (0..count)
        .map(|k| {
            let t = (lo + k as f64 * h).exp();
            second_difference_l1(v, t, grid) / t
        })
        .collect();
    let sum = f.iter().sum::<f64>() - 0.5 * (f[0] + f[count - 1]);
    (sum * h, count)
}

/// The second-difference seminorm on `[t_min, 1]`, log-spaced in `t`, with a
/// convergence check by halving `t_min`.
pub fn c11_seminorm(v: &FunctionDesc, t_min: f64, grid: &InnerGrid) -> Result<RegularitySeminorm> {
    if !(t_min > 0.0 && t_min <= 0.1) {
        return Err(Error::InvalidArgument(format!("t_min must lie in (0, 0.1], got {t_min}")));
    }
    if grid.points < 3 || !(grid.half_width > 0.0) {
        return Err(Error::InvalidArgument("inner grid needs at least 3 points and a positive width".into()));
    }
    let (value, t_nodes) = log_trapezoid(v, t_min, grid);
    let (refined, _) = log_trapezoid(v, t_min / 2.0, grid);
    let relative_change = if refined == 0.0 { 0.0 } else { (refined - value).abs() / refined.abs() };
    if relative_change > C11_NOT_CONVERGED {
        return Err(Error::NotConverged(format!("second-difference seminorm changed by {:.1}% when t_min was halved", 100.0 * relative_change)));
    }
    Ok(RegularitySeminorm { value, t_min, converged: relative_change <= C11_CONVERGED, relative_change, grid: *grid, t_nodes })
}
