use serde::{Deserialize, Serialize};

use super::phases::{phase_functions, FieldSpec, PhaseTriple, DEFAULT_PHASE_TOL};
use crate::error::{Error, Result};
use crate::lattice::{FunctionDesc, GridBasis};

pub const DEFAULT_TIME_STEPS: usize = 256;
pub const DEFAULT_DYSON_ORDER: usize = 6;
pub const MIN_TIME_STEPS: usize = 16;

/// Everything needed to build the one-period propagator of
/// `H(t) = H_ω + E(t)x + V(x)` on a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScenario", deny_unknown_fields)]
pub struct FloquetScenario {
    pub basis: GridBasis,
    pub field: FieldSpec,
    /// `2π/T`.
    pub omega0: f64,
    pub potential: Option<FunctionDesc>,
    pub time_steps: usize,
    pub dyson_order: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    basis: GridBasis,
    field: FieldSpec,
    #[serde(default)]
    omega0: Option<f64>,
    #[serde(default)]
    potential: Option<FunctionDesc>,
    #[serde(default = "default_steps")]
    time_steps: usize,
    #[serde(default = "default_order")]
    dyson_order: usize,
}

fn default_steps() -> usize {
    DEFAULT_TIME_STEPS
}

fn default_order() -> usize {
    DEFAULT_DYSON_ORDER
}

impl TryFrom<RawScenario> for FloquetScenario {
    type Error = Error;
    fn try_from(r: RawScenario) -> Result<Self> {
        let s = FloquetScenario::new(r.basis, r.field, r.potential, r.time_steps, r.dyson_order)?;
        if let Some(w0) = r.omega0 {
            if (w0 * s.field.period - 2.0 * std::f64::consts::PI).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!("omega0 = {w0} is inconsistent with period {}", s.field.period)));
            }
        }
        Ok(s)
    }
}

impl FloquetScenario {
    pub fn new(basis: GridBasis, field: FieldSpec, potential: Option<FunctionDesc>, time_steps: usize, dyson_order: usize) -> Result<Self> {
        if time_steps == 0 {
            return Err(Error::InvalidArgument("time_steps must be positive".into()));
        }
        let omega0 = field.omega0();
        Ok(Self { basis, field, omega0, potential, time_steps, dyson_order })
    }

    pub fn period(&self) -> f64 {
        self.field.period
    }

    pub fn omega(&self) -> f64 {
        self.basis.omega
    }

    pub fn is_resonant(&self) -> bool {
        (self.basis.omega - self.omega0).abs() <= 1e-12
    }

    pub fn potential(&self) -> Result<&FunctionDesc> {
        self.potential.as_ref().ok_or(Error::NoPotential)
    }

    pub fn with_basis(&self, basis: GridBasis) -> Self {
        Self { basis, ..self.clone() }
    }

    pub fn with_potential(&self, v: Option<FunctionDesc>) -> Self {
        Self { potential: v, ..self.clone() }
    }

    pub fn with_time_steps(&self, steps: usize) -> Self {
        Self { time_steps: steps, ..self.clone() }
    }

    pub fn phases(&self, t: f64) -> Result<PhaseTriple> {
        phase_functions(&self.field, self.omega(), t, DEFAULT_PHASE_TOL)
    }

    pub fn phases_at_period(&self) -> Result<PhaseTriple> {
        self.phases(self.period())
    }
}
