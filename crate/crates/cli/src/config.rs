//! Run configuration: a TOML (or JSON) file, command-line overrides on top,
//! then validation into core types. Unknown keys are rejected and every
//! error names the key path it came from.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use floquet_core::lattice::{FunctionDesc, GridBasis, InteriorWeight};
use floquet_core::mourre::Arc;
use floquet_core::propagator::{FieldSpec, FloquetScenario, Observable, DEFAULT_DYSON_ORDER, DEFAULT_TIME_STEPS};
use floquet_core::scenarios::{scenario_by_name, NamedScenario};

use crate::error::CliError;

pub const OUTPUT_DIR_ENV: &str = "FLOQUET_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "floquet-out";
pub const DEFAULT_SCENARIO: &str = "RES_SIN";
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_points: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub x_cut: f64,
    pub p_cut: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub taper: Option<f64>,
}

/// A Gaussian wave packet `exp(−(x−x0)²/2w² + i·p0·x)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster_tol: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MourreConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arc: Option<String>,
    /// `auto`, `x` or `p`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub use_interior: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VirialConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolventConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_count: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_count: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateConfig>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_count: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateConfig>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UsmoothConfig {
    /// `translation` (own grid) or `scenario` (the Floquet operator).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_points: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bump_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct C11Config {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeisenbergConfig {
    /// `scenario` or `shift`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegfamilyConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arc: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_grid: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenarios: Option<Vec<String>>,
}

/// The file format, field for field. Everything is optional; see
/// [`RunConfig::resolve`] for the defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_steps: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dyson_order: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mourre: Option<MourreConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub virial: Option<VirialConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolvent: Option<ResolventConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensityConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub usmooth: Option<UsmoothConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c11: Option<C11Config>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heisenberg: Option<HeisenbergConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regfamily: Option<RegfamilyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<SuiteConfig>,
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Parse a config file; `.json` files as JSON, everything else as TOML.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    if is_json(path) {
        parse_json(&text)
    } else {
        parse_toml(&text)
    }
}

pub fn parse_toml(text: &str) -> Result<RunConfig, CliError> {
    let de = toml::Deserializer::new(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Parse { path, message: inner.message().to_string() }
    })
}

pub fn parse_json(text: &str) -> Result<RunConfig, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Parse { path, message: e.into_inner().to_string() }
    })
}

pub fn save_config(cfg: &RunConfig, path: &Path) -> Result<(), CliError> {
    let text = if is_json(path) {
        serde_json::to_string_pretty(cfg).map_err(|e| CliError::Io(e.to_string()))? + "\n"
    } else {
        // TOML integers are signed 64-bit.
        if cfg.seed.is_some_and(|s| s > i64::MAX as u64) {
            return Err(invalid("seed", "seeds above 2^63 − 1 cannot be written to TOML; use a JSON config"));
        }
        toml::to_string_pretty(cfg).map_err(|e| CliError::Io(e.to_string()))?
    };
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn invalid(path: &str, message: impl Into<String>) -> CliError {
    CliError::Validation { path: path.to_string(), message: message.into() }
}

fn positive_count(v: Option<i64>, path: &str, default: usize) -> Result<usize, CliError> {
    match v {
        None => Ok(default),
        Some(n) if n > 0 => Ok(n as usize),
        Some(n) => Err(invalid(path, format!("must be a positive integer, got {n}"))),
    }
}

fn positive_real(v: Option<f64>, path: &str, default: f64) -> Result<f64, CliError> {
    match v {
        None => Ok(default),
        Some(x) if x.is_finite() && x > 0.0 => Ok(x),
        Some(x) => Err(invalid(path, format!("must be positive and finite, got {x}"))),
    }
}

fn function(text: &str, path: &str) -> Result<FunctionDesc, CliError> {
    text.parse::<FunctionDesc>().map_err(|e| invalid(path, e.to_string()))
}

fn arc(text: Option<&str>, path: &str) -> Result<Arc, CliError> {
    text.unwrap_or("full").parse::<Arc>().map_err(|e| invalid(path, e.to_string()))
}

/// Normalised wave packet on the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct WavePacket {
    pub x0: f64,
    pub p0: f64,
    pub width: f64,
}

impl WavePacket {
    fn resolve(cfg: Option<&StateConfig>, path: &str, default: WavePacket) -> Result<Self, CliError> {
        let Some(c) = cfg else { return Ok(default) };
        let finite = |v: Option<f64>, key: &str, d: f64| match v {
            None => Ok(d),
            Some(x) if x.is_finite() => Ok(x),
            Some(x) => Err(invalid(&format!("{path}.{key}"), format!("must be finite, got {x}"))),
        };
        Ok(Self {
            x0: finite(c.x0, "x0", default.x0)?,
            p0: finite(c.p0, "p0", default.p0)?,
            width: positive_real(c.width, &format!("{path}.width"), default.width)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum UsmoothModel {
    /// Shift by `shift_fraction·dx` on its own grid of `n_points`.
    Translation {
        n_points: usize,
        shift_fraction: f64,
    },
    Scenario,
}

#[derive(Clone, Debug, PartialEq)]
pub enum HeisenbergModel {
    Scenario,
    Shift,
}

/// A validated configuration with every default filled in.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub named: NamedScenario,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub format: Format,
    pub cluster_tol: f64,
    pub mourre_arc: Arc,
    pub mourre_generator: Option<Observable>,
    pub mourre_use_interior: bool,
    pub virial_observable: Observable,
    pub resolvent_theta_count: usize,
    pub resolvent_r_count: usize,
    pub resolvent_r_ratio: f64,
    pub resolvent_state: WavePacket,
    pub density_r: f64,
    pub density_theta_count: usize,
    pub density_state: WavePacket,
    pub usmooth_model: UsmoothModel,
    pub usmooth_bump_width: f64,
    pub usmooth_n_max: Option<usize>,
    pub usmooth_samples: usize,
    pub c11_t_min: f64,
    pub c11_half_width: f64,
    pub c11_points: usize,
    pub heisenberg_model: HeisenbergModel,
    pub heisenberg_t_grid: Vec<f64>,
    pub regfamily_arc: Arc,
    pub regfamily_epsilon_grid: Vec<f64>,
    pub suite_jobs: usize,
    pub suite_scenarios: Option<Vec<String>>,
}

impl RunConfig {
    /// Validate and fill defaults. `output_dir` (the flag, or else
    /// [`OUTPUT_DIR_ENV`]) takes precedence over the file's `output_dir`.
    pub fn resolve(&self, output_dir: Option<&str>) -> Result<Resolved, CliError> {
        let named = self.resolve_scenario()?;
        let output_dir = PathBuf::from(output_dir.or(self.output_dir.as_deref()).unwrap_or(DEFAULT_OUTPUT_DIR));

        let sp = self.spectrum.clone().unwrap_or_default();
        let mo = self.mourre.clone().unwrap_or_default();
        let vi = self.virial.clone().unwrap_or_default();
        let re = self.resolvent.clone().unwrap_or_default();
        let de = self.density.clone().unwrap_or_default();
        let us = self.usmooth.clone().unwrap_or_default();
        let c11 = self.c11.clone().unwrap_or_default();
        let he = self.heisenberg.clone().unwrap_or_default();
        let rf = self.regfamily.clone().unwrap_or_default();
        let su = self.suite.clone().unwrap_or_default();

        let observable = |v: Option<&str>, path: &str, d: Observable| -> Result<Observable, CliError> {
            match v {
                None => Ok(d),
                Some(t) => t.parse::<Observable>().map_err(|e| invalid(path, e.to_string())),
            }
        };
        let mourre_generator = match mo.generator.as_deref() {
            None | Some("auto") => None,
            Some(t) => Some(observable(Some(t), "mourre.generator", Observable::X)?),
        };
        let packet = WavePacket { x0: 0.0, p0: 0.0, width: 1.0 };

        let usmooth_model = match us.model.as_deref().unwrap_or("translation") {
            "translation" => UsmoothModel::Translation {
                n_points: positive_count(us.n_points, "usmooth.n_points", 128)?,
                shift_fraction: positive_real(us.shift_fraction, "usmooth.shift_fraction", 1.0 / 16.0)?,
            },
            "scenario" => UsmoothModel::Scenario,
            other => return Err(invalid("usmooth.model", format!("expected `translation` or `scenario`, got `{other}`"))),
        };
        let heisenberg_model = match he.model.as_deref().unwrap_or("scenario") {
            "scenario" => HeisenbergModel::Scenario,
            "shift" => HeisenbergModel::Shift,
            other => return Err(invalid("heisenberg.model", format!("expected `scenario` or `shift`, got `{other}`"))),
        };
        let heisenberg_t_grid = he.t_grid.unwrap_or_else(|| vec![0.5, 1.0, 2.0, std::f64::consts::PI]);
        if heisenberg_t_grid.is_empty() || heisenberg_t_grid.iter().any(|t| !t.is_finite()) {
            return Err(invalid("heisenberg.t_grid", "must be a nonempty list of finite times"));
        }
        let regfamily_epsilon_grid = rf.epsilon_grid.unwrap_or_else(floquet_core::mourre::default_epsilon_grid);
        if regfamily_epsilon_grid.is_empty() || regfamily_epsilon_grid.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
            return Err(invalid("regfamily.epsilon_grid", "must be a nonempty list in (0, 1]"));
        }
        let density_r = positive_real(de.r, "density.r", 0.99)?;
        if density_r >= 1.0 {
            return Err(invalid("density.r", format!("must lie in (0, 1), got {density_r}")));
        }
        let r_ratio = positive_real(re.r_ratio, "resolvent.r_ratio", floquet_core::diagnostics::DEFAULT_RADIUS_RATIO)?;
        if r_ratio <= 1.0 {
            return Err(invalid("resolvent.r_ratio", format!("must exceed 1, got {r_ratio}")));
        }
        let c11_t_min = positive_real(c11.t_min, "c11.t_min", floquet_core::commutator::DEFAULT_T_MIN)?;
        let inner = floquet_core::commutator::InnerGrid::default();
        let c11_points = positive_count(c11.points, "c11.points", inner.points)?;
        if c11_points < 3 {
            return Err(invalid("c11.points", "needs at least 3 points"));
        }
        let usmooth_n_max = match us.n_max {
            None => None,
            Some(n) if n >= floquet_core::diagnostics::MIN_N_MAX as i64 => Some(n as usize),
            Some(n) => return Err(invalid("usmooth.n_max", format!("must be at least {}, got {n}", floquet_core::diagnostics::MIN_N_MAX))),
        };

        Ok(Resolved {
            output_dir,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            format: self.format.unwrap_or_default(),
            cluster_tol: positive_real(sp.cluster_tol, "spectrum.cluster_tol", floquet_core::linalg::DEFAULT_CLUSTER_TOL)?,
            mourre_arc: arc(mo.arc.as_deref(), "mourre.arc")?,
            mourre_generator,
            mourre_use_interior: mo.use_interior.unwrap_or(true),
            virial_observable: observable(vi.observable.as_deref(), "virial.observable", Observable::P)?,
            resolvent_theta_count: positive_count(re.theta_count, "resolvent.theta_count", 9)?,
            resolvent_r_count: positive_count(re.r_count, "resolvent.r_count", 40)?,
            resolvent_r_ratio: r_ratio,
            resolvent_state: WavePacket::resolve(re.state.as_ref(), "resolvent.state", packet.clone())?,
            density_r,
            density_theta_count: positive_count(de.theta_count, "density.theta_count", 2048)?,
            density_state: WavePacket::resolve(de.state.as_ref(), "density.state", packet)?,
            usmooth_model,
            usmooth_bump_width: positive_real(us.bump_width, "usmooth.bump_width", 0.2)?,
            usmooth_n_max,
            usmooth_samples: match us.samples {
                None => 8,
                Some(n) if n >= 0 => n as usize,
                Some(n) => return Err(invalid("usmooth.samples", format!("must be nonnegative, got {n}"))),
            },
            c11_t_min,
            c11_half_width: positive_real(c11.half_width, "c11.half_width", inner.half_width)?,
            c11_points,
            heisenberg_model,
            heisenberg_t_grid,
            regfamily_arc: arc(rf.arc.as_deref(), "regfamily.arc")?,
            regfamily_epsilon_grid,
            suite_jobs: positive_count(su.jobs, "suite.jobs", 1)?,
            suite_scenarios: su.scenarios,
            named,
        })
    }

    /// Named scenario with overrides, or an inline one when no name is given
    /// and both `basis` and `field` are present.
    fn resolve_scenario(&self) -> Result<NamedScenario, CliError> {
        let inline = self.scenario.is_none() && self.basis.is_some() && self.field.is_some();
        let base = if inline {
            None
        } else {
            let name = self.scenario.as_deref().unwrap_or(DEFAULT_SCENARIO);
            Some(scenario_by_name(name).map_err(|e| invalid("scenario", e.to_string()))?)
        };

        let basis = match (&self.basis, &base) {
            (None, Some(b)) => b.scenario.basis.clone(),
            (Some(bc), b) => {
                let d = b.as_ref().map(|n| n.scenario.basis.clone()).unwrap_or_else(GridBasis::reference);
                let n = match bc.n_points {
                    None => d.n_points,
                    Some(n) if n >= 2 && (n as u64).is_power_of_two() => n as usize,
                    Some(n) => return Err(invalid("basis.n_points", format!("must be a power of two ≥ 2, got {n}"))),
                };
                let l = positive_real(bc.half_width, "basis.half_width", d.half_width)?;
                let w = positive_real(bc.omega, "basis.omega", d.omega)?;
                GridBasis::new(n, l, w).map_err(|e| invalid("basis", e.to_string()))?
            }
            (None, None) => unreachable!("inline scenarios carry a basis"),
        };

        let field = match (&self.field, &base) {
            (None, Some(b)) => b.scenario.field.clone(),
            (Some(fc), b) => {
                let drive = match (&fc.drive, b) {
                    (Some(t), _) => function(t, "field.drive")?,
                    (None, Some(n)) => n.scenario.field.drive.clone(),
                    (None, None) => return Err(invalid("field.drive", "an inline scenario needs a drive")),
                };
                let period = match (fc.period, b) {
                    (Some(p), _) => positive_real(Some(p), "field.period", 1.0)?,
                    (None, Some(n)) => n.scenario.field.period,
                    (None, None) => 2.0 * std::f64::consts::PI / basis.omega,
                };
                FieldSpec::new(drive, period).map_err(|e| invalid("field", e.to_string()))?
            }
            (None, None) => unreachable!("inline scenarios carry a field"),
        };

        let potential = match self.potential.as_deref() {
            Some("none") => None,
            Some(t) => Some(function(t, "potential")?),
            None => base.as_ref().and_then(|b| b.scenario.potential.clone()),
        };
        let steps = positive_count(self.time_steps, "time_steps", base.as_ref().map_or(DEFAULT_TIME_STEPS, |b| b.scenario.time_steps))?;
        let order = match self.dyson_order {
            None => base.as_ref().map_or(DEFAULT_DYSON_ORDER, |b| b.scenario.dyson_order),
            Some(k) if (0..=32).contains(&k) => k as usize,
            Some(k) => return Err(invalid("dyson_order", format!("must lie in 0..=32, got {k}"))),
        };
        let scenario = FloquetScenario::new(basis.clone(), field, potential, steps, order).map_err(|e| invalid("scenario", e.to_string()))?;

        let window = match &self.window {
            Some(w) => InteriorWeight::from_cutoffs(&basis, w.x_cut, w.p_cut, w.taper.unwrap_or(floquet_core::lattice::DEFAULT_TAPER))
                .map_err(|e| invalid("window", e.to_string()))?,
            None => match &base {
                Some(b) if b.scenario.basis == basis => b.window.clone(),
                _ => InteriorWeight::oscillator(&basis),
            },
        };
        let name = base.as_ref().map_or_else(|| "inline".to_string(), |b| b.name.clone());
        let expected: Vec<_> = base.map(|b| b.expected.into_iter().collect()).unwrap_or_default();
        NamedScenario::new(&name, scenario, &expected, window).map_err(|e| invalid("window", e.to_string()))
    }
}
