use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{FunctionDesc, GridBasis, InteriorWeight};
use crate::propagator::{FieldSpec, FloquetScenario, DEFAULT_DYSON_ORDER, DEFAULT_TIME_STEPS};

/// Qualitative outcome a scenario is built to show.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    PurePoint,
    AcTranslation,
    PerturbedStrict,
    PerturbedCompact,
}

/// Diagnostics that carry an expectation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Diagnostic {
    Spectrum,
    Mourre,
    Virial,
    TheoremA,
    Heisenberg,
}

impl Diagnostic {
    pub const ALL: [Diagnostic; 5] = [Self::Spectrum, Self::Mourre, Self::Virial, Self::TheoremA, Self::Heisenberg];

    pub fn name(self) -> &'static str {
        match self {
            Self::Spectrum => "spectrum",
            Self::Mourre => "mourre",
            Self::Virial => "virial",
            Self::TheoremA => "theorem-a",
            Self::Heisenberg => "heisenberg",
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::PurePoint => "pure_point",
            Self::AcTranslation => "ac_translation",
            Self::PerturbedStrict => "perturbed_strict",
            Self::PerturbedCompact => "perturbed_compact",
        })
    }
}

/// A ready-to-run configuration with the window its diagnostics use.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedScenario {
    pub name: String,
    pub scenario: FloquetScenario,
    pub expected: BTreeMap<Diagnostic, Expectation>,
    pub window: InteriorWeight,
}

impl NamedScenario {
    pub fn new(name: &str, scenario: FloquetScenario, expected: &[(Diagnostic, Expectation)], window: InteriorWeight) -> Result<Self> {
        if window.basis != scenario.basis {
            return Err(Error::InvalidArgument(format!("window of `{name}` is built on a different grid")));
        }
        Ok(Self { name: name.to_string(), scenario, expected: expected.iter().copied().collect(), window })
    }
}

/// Grid and window for the compact-remainder scenario: the drift `|φ₂(T)|/ω`
/// plus the window must fit inside both cutoffs, and the window must hold
/// enough states to see the remainder decay.
pub const COMPACT_N: usize = 512;
pub const COMPACT_L: f64 = 26.0;
pub const COMPACT_CUT: f64 = 14.0;
pub const COMPACT_TAPER: f64 = 0.3;

/// `V = a·exp(−x²)` with `2π·max|V′| = 2π·a·√(2/e)` well below `|φ₂(T)| = π`.
pub const STRICT_AMPLITUDE: f64 = 0.1;
/// Large enough that the strict bound fails, small enough that the
/// remainder stays a few directions wide.
pub const COMPACT_AMPLITUDE: f64 = 2.0;

/// Numerator and denominator of the golden-ratio convergent fixing `ωT/2π`.
pub const NONRES_RATIO: (u32, u32) = (89, 55);

fn field(drive: FunctionDesc, period: f64) -> FieldSpec {
    FieldSpec::new(drive, period).expect("builtin drives are periodic")
}

fn scenario(basis: GridBasis, f: FieldSpec, v: Option<FunctionDesc>) -> FloquetScenario {
    FloquetScenario::new(basis, f, v, DEFAULT_TIME_STEPS, DEFAULT_DYSON_ORDER).expect("builtin scenarios are valid")
}

pub fn builtin_scenarios() -> Vec<NamedScenario> {
    use Diagnostic::*;
    use Expectation::*;
    let b = GridBasis::reference();
    let w = InteriorWeight::oscillator(&b);
    let t = 2.0 * PI;
    let sin = |a: f64, k: f64| FunctionDesc::Sin { a, b: k };
    let cos = |a: f64, k: f64| FunctionDesc::Cos { a, b: k };

    let t_nonres = t * NONRES_RATIO.0 as f64 / NONRES_RATIO.1 as f64;
    let nonres = scenario(b.clone(), field(sin(1.0, t / t_nonres), t_nonres), None);
    let res_null = scenario(b.clone(), field(sin(1.0, 2.0), t), None);
    let res_sin = scenario(b.clone(), field(sin(1.0, 1.0), t), None);
    let res_cos = scenario(b.clone(), field(cos(1.0, 1.0), t), None);
    let strict = res_sin.with_potential(Some(FunctionDesc::Gaussian { a: STRICT_AMPLITUDE, s: 1.0 }));
    let wide = GridBasis::new(COMPACT_N, COMPACT_L, 1.0).expect("valid grid");
    let wide_window = InteriorWeight::from_cutoffs(&wide, COMPACT_CUT, COMPACT_CUT, COMPACT_TAPER).expect("valid window");
    let compact = res_sin.with_basis(wide).with_potential(Some(FunctionDesc::Gaussian { a: COMPACT_AMPLITUDE, s: 1.0 }));

    let named = |n: &str, s: FloquetScenario, e: &[(Diagnostic, Expectation)], win: &InteriorWeight| {
        NamedScenario::new(n, s, e, win.clone()).expect("builtin window matches its grid")
    };
    vec![
        named("NONRES", nonres, &[(Spectrum, PurePoint), (Virial, PurePoint)], &w),
        named("RES_NULL", res_null, &[(Spectrum, PurePoint), (Virial, PurePoint)], &w),
        named("RES_SIN", res_sin, &[(Spectrum, AcTranslation), (Mourre, AcTranslation), (Heisenberg, AcTranslation)], &w),
        named("RES_COS", res_cos, &[(Spectrum, AcTranslation), (Mourre, AcTranslation)], &w),
        named("PERT_STRICT", strict, &[(Mourre, PerturbedStrict), (TheoremA, PerturbedStrict)], &w),
        named("PERT_COMPACT", compact, &[(Mourre, PerturbedCompact), (TheoremA, PerturbedCompact)], &wide_window),
    ]
}

pub fn scenario_by_name(name: &str) -> Result<NamedScenario> {
    builtin_scenarios()
        .into_iter()
        .find(|s| s.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::InvalidArgument(format!("unknown scenario `{name}` (known: {})", builtin_names().join(", "))))
}

pub fn builtin_names() -> Vec<String> {
    builtin_scenarios().into_iter().map(|s| s.name).collect()
}

impl FromStr for Diagnostic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|d| d.name() == s).ok_or_else(|| Error::InvalidArgument(format!("unknown diagnostic `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resonant_phases_at_period() {
        let all = builtin_scenarios();
        let get = |n: &str| all.iter().find(|s| s.name == n).unwrap().scenario.phases_at_period().unwrap();
        // Antiderivatives: ∫₀^{2π} sin τ cos τ = 0, ∫₀^{2π} sin² τ = π.
        let p = get("RES_SIN");
        assert!(p.phi1.abs() < 1e-9 && (p.phi2.abs() - PI).abs() < 1e-9);
        let p = get("RES_COS");
        assert!((p.phi1 - PI).abs() < 1e-9 && p.phi2.abs() < 1e-9);
        let p = get("RES_NULL");
        assert!(p.phi1.abs() < 1e-9 && p.phi2.abs() < 1e-9);
    }

    #[test]
    fn nonresonant_ratio_and_lookup() {
        let s = scenario_by_name("nonres").unwrap().scenario;
        assert!(!s.is_resonant());
        assert!((s.omega() * s.period() / (2.0 * PI) - 89.0 / 55.0).abs() < 1e-12);
        assert!(scenario_by_name("RES_XYZ").is_err());
        assert_eq!("theorem-a".parse::<Diagnostic>().unwrap(), Diagnostic::TheoremA);
    }
}
