use super::free::FreeSystem;
use super::phases::{phase_table, DEFAULT_PHASE_TOL};
use super::quadrature::cumulative_simpson_weights;
use super::scenario::{FloquetScenario, MIN_TIME_STEPS};
use crate::error::{Error, Result};
use crate::lattice::sample;
use crate::linalg::{ComplexMatrix, C64};

/// Truncated Dyson series for `Ω(T)` with its layer-by-layer partial sums.
#[derive(Clone, Debug)]
pub struct DysonSeries {
    /// `Σ_{j≤J} Ω^{(j)}(T)`.
    pub omega: ComplexMatrix,
    /// `Ω^{(j)}(T)` for `j = 0..=J`.
    pub terms: Vec<ComplexMatrix>,
    /// `(T‖V‖_∞)^{J+1}/(J+1)!`, the tail of the exponential majorant.
    pub remainder_bound: f64,
}

/// `(T‖V‖)^{J+1}/(J+1)!`
pub fn dyson_remainder_bound(t_norm_v: f64, order: usize) -> f64 {
    (1..=order + 1).fold(1.0, |acc, k| acc * t_norm_v / k as f64)
}

/// `Ω^{(j)}(t) = −i∫₀ᵗ W(τ)Ω^{(j−1)}(τ)dτ` with `W(τ) = U₀(τ)†VU₀(τ)`, each
/// layer integrated cumulatively on the `time_steps + 1` nodes with a
/// third-order three-point rule.
pub fn dyson_series(scenario: &FloquetScenario, order: usize) -> Result<DysonSeries> {
    let n = scenario.basis.n_points;
    let v = sample(&scenario.basis, scenario.potential()?)?;
    let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let remainder_bound = dyson_remainder_bound(scenario.period() * vmax, order);
    let id = ComplexMatrix::identity(n);
    if order == 0 {
        return Ok(DysonSeries { omega: id.clone(), terms: vec![id], remainder_bound });
    }
    let k = scenario.time_steps;
    if k < MIN_TIME_STEPS {
        return Err(Error::InvalidArgument(format!("time_steps must be at least {MIN_TIME_STEPS}, got {k}")));
    }
    let dt = scenario.period() / k as f64;
    let fs = FreeSystem::new(&scenario.basis)?;
    let times: Vec<f64> = (0..=k).map(|j| j as f64 * dt).collect();
    let phases = phase_table(&scenario.field, scenario.omega(), &times, DEFAULT_PHASE_TOL)?;
    let vd: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
    let w: Vec<ComplexMatrix> = phases
        .iter()
        .map(|ph| {
            let u0 = fs.propagator(ph);
            u0.adj_mul(&u0.scale_rows(&vd))
        })
        .collect();

    let weights = cumulative_simpson_weights(k);
    let mut layer: Vec<ComplexMatrix> = vec![id.clone(); k + 1];
    let mut terms = vec![id.clone()];
    let mut omega = id;
    let minus_i_dt = C64::new(0.0, -dt);
    for _ in 1..=order {
        let integrand: Vec<ComplexMatrix> = w.iter().zip(&layer).map(|(wk, ok)| wk.matmul(ok)).collect();
        let mut next = Vec::with_capacity(k + 1);
        let mut acc = ComplexMatrix::zeros(n, n);
        next.push(acc.clone());
        for rule in &weights {
            for &(node, c) in rule {
                acc.axpy(minus_i_dt * c, &integrand[node]);
            }
            next.push(acc.clone());
        }
        omega.axpy(C64::new(1.0, 0.0), &next[k]);
        terms.push(next[k].clone());
        layer = next;
    }
    Ok(DysonSeries { omega, terms, remainder_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{FunctionDesc, GridBasis};
    use crate::propagator::FieldSpec;
    use std::f64::consts::PI;

    fn scenario(v: FunctionDesc) -> FloquetScenario {
        let basis = GridBasis::new(32, 6.0, 1.0).unwrap();
        FloquetScenario::new(basis, FieldSpec::new(FunctionDesc::Cos { a: 1.0, b: 1.0 }, 2.0 * PI).unwrap(), Some(v), 32, 6).unwrap()
    }

    #[test]
    fn order_zero_is_identity() {
        let d = dyson_series(&scenario(FunctionDesc::Gaussian { a: 0.1, s: 1.0 }), 0).unwrap();
        assert_eq!(d.omega, ComplexMatrix::identity(32));
    }

    #[test]
    fn constant_potential_first_order() {
        let c = 0.05;
        let s = scenario(FunctionDesc::Constant(c));
        let d = dyson_series(&s, 1).unwrap();
        let expect = ComplexMatrix::identity(32).scale(C64::new(1.0, -c * s.period()));
        assert!(d.omega.sub(&expect).max_abs() < 1e-12);
        let full = dyson_series(&s, 12).unwrap();
        let exact = ComplexMatrix::identity(32).scale(C64::from_polar(1.0, -c * s.period()));
        let gap = full.omega.sub(&exact).max_abs();
        // Layers past the third have cubic and higher integrands: O(h³) rule error.
        assert!(gap < 5e-8, "{gap}");
    }

    #[test]
    fn remainder_bound_values() {
        assert!((dyson_remainder_bound(2.0, 1) - 2.0).abs() < 1e-15);
        assert!((dyson_remainder_bound(1.0, 6) - 1.0 / 5040.0).abs() < 1e-18);
    }
}
