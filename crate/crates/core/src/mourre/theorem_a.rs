use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::commutator::{c11_seminorm, potential_derivative, InnerGrid, DEFAULT_T_MIN};
use crate::error::Result;
use crate::propagator::FloquetScenario;

/// Fraction of the window treated as the tail for the decay test.
const TAIL_FRACTION: f64 = 0.1;
/// The derivative counts as vanishing when its tail maximum is below this
/// fraction of its supremum.
const VANISHING_REL_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct C11Hypothesis {
    /// Seminorm value, absent when the integral did not settle.
    pub value: Option<f64>,
    pub satisfied: bool,
}

/// Hypotheses of the absence-of-point-spectrum theorem, evaluated on the
/// grid. Margins are negative when the hypothesis holds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremACriteria {
    pub hypothesis_c11: C11Hypothesis,
    /// `∂_xV → 0` at infinity, read as: tail maximum over the outer 10% of
    /// the window below `1e−3·sup|∂_xV|`.
    pub vanishing_derivative: bool,
    pub derivative_sup: f64,
    pub tail_derivative_max: f64,
    pub phi1: f64,
    pub phi2: f64,
    /// `T‖∂_xV‖_∞ − |φ₁(T)|`
    pub strict_bound_1: f64,
    /// `2π‖∂_xV‖_∞ − |φ₂(T)|`
    pub strict_bound_2: f64,
}

pub fn theorem_a_criteria(scenario: &FloquetScenario) -> Result<TheoremACriteria> {
    let v = scenario.potential()?;
    let basis = &scenario.basis;
    let dv = potential_derivative(basis, v, 1)?;
    let derivative_sup = dv.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let edge = (1.0 - TAIL_FRACTION) * basis.half_width;
    let tail_derivative_max = basis.points().iter().zip(&dv).filter(|(x, _)| x.abs() >= edge).fold(0.0f64, |m, (_, d)| m.max(d.abs()));
    let vanishing_derivative = tail_derivative_max <= VANISHING_REL_TOL * derivative_sup;

    let grid = InnerGrid { half_width: basis.half_width + 2.0, ..InnerGrid::default() };
    let value = c11_seminorm(v, DEFAULT_T_MIN, &grid).ok().map(|r| r.value);
    let hypothesis_c11 = C11Hypothesis { satisfied: value.is_some_and(f64::is_finite), value };

    let ph = scenario.phases_at_period()?;
    Ok(TheoremACriteria {
        hypothesis_c11,
        vanishing_derivative,
        derivative_sup,
        tail_derivative_max,
        phi1: ph.phi1,
        phi2: ph.phi2,
        strict_bound_1: scenario.period() * derivative_sup - ph.phi1.abs(),
        strict_bound_2: 2.0 * PI * derivative_sup - ph.phi2.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{FunctionDesc, GridBasis};
    use crate::propagator::FieldSpec;

    fn scenario(v: FunctionDesc) -> FloquetScenario {
        let basis = GridBasis::new(128, 12.0, 1.0).unwrap();
        FloquetScenario::new(basis, FieldSpec::new(FunctionDesc::Sin { a: 1.0, b: 1.0 }, 2.0 * PI).unwrap(), Some(v), 64, 6).unwrap()
    }

    #[test]
    fn zero_potential_satisfies_everything() {
        let c = theorem_a_criteria(&scenario(FunctionDesc::Zero)).unwrap();
        assert!(c.vanishing_derivative && c.hypothesis_c11.satisfied);
        assert!((c.strict_bound_2 + PI).abs() < 1e-9);
        assert!((c.strict_bound_1 + c.phi1.abs()).abs() < 1e-15);
    }

    #[test]
    fn gaussian_threshold_matches_closed_form() {
        // max|∂_x(a e^{−x²})| = a√(2/e); the second bound holds iff a√(2/e)·2π < π.
        let a_star = 0.5 / (2.0 / std::f64::consts::E).sqrt();
        for (a, holds) in [(0.9 * a_star, true), (1.1 * a_star, false)] {
            let c = theorem_a_criteria(&scenario(FunctionDesc::Gaussian { a, s: 1.0 })).unwrap();
            assert_eq!(c.strict_bound_2 < 0.0, holds, "a = {a}: {c:?}");
        }
    }

    #[test]
    fn non_decaying_derivative_is_flagged() {
        let c = theorem_a_criteria(&scenario(FunctionDesc::Sin { a: 0.1, b: 1.0 })).unwrap();
        assert!(!c.vanishing_derivative);
    }
}
