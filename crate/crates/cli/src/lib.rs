//! Command-line front end: config ingestion, one subcommand per diagnostic,
//! CSV/JSON emission.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{load_config, parse_json, parse_toml, save_config, Format, Resolved, RunConfig};
pub use error::{CliError, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK};

#[derive(Parser, Debug)]
#[command(name = "floquet", version, about = "Spectral diagnostics for the periodically driven harmonic oscillator")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// TOML config file (`.json` for JSON).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Builtin scenario name, overriding the config.
    #[arg(long, global = true)]
    scenario: Option<String>,
    /// Potential descriptor such as `gaussian(0.1,1)`, or `none`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    potential: Option<String>,
    /// Grid size (power of two).
    #[arg(long, global = true, allow_hyphen_values = true)]
    n_points: Option<i64>,
    #[arg(long, global = true, env = config::OUTPUT_DIR_ENV, value_name = "DIR")]
    output_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenphases and multiplicity clusters of the Floquet operator U(T),
    /// with the count of eigenvalues localized in the interior window
    /// (free case split: pure point when both phases vanish at T).
    Spectrum,
    /// Mourre estimate E(U†AU − A)E ≥ cE on an arc, with rank-k constants
    /// and remainder singular values (propagating condition; free resonant
    /// map gives c = 1 with A = −p/φ₁(T) or −ωx/φ₂(T)).
    Mourre {
        /// `full` or `lo:hi` in radians.
        #[arg(long, allow_hyphen_values = true)]
        arc: Option<String>,
        /// `auto`, `x` or `p`.
        #[arg(long)]
        generator: Option<String>,
    },
    /// Virial identity: each eigenprojection annihilates U†AU − A, checked
    /// per eigenvector against 2‖A‖·(eigen residual).
    Virial {
        /// `x` or `p`.
        #[arg(long)]
        observable: Option<String>,
    },
    /// Boundary values of ⟨φ,(1 − re^{iθ}U†)^{−1}φ⟩ from inside and outside
    /// the disc, with Cauchy gaps along r (limiting absorption on the circle).
    Resolvent,
    /// Poisson-kernel spectral density d(θ) of a wave packet at radius r,
    /// integrating to ‖φ‖² (U-smoothness extension to densities).
    Density,
    /// The five equivalent U-smoothness constants C₁…C₅ for a bump
    /// multiplication operator B (characterization of U-smooth operators).
    Usmooth {
        /// `translation` or `scenario`.
        #[arg(long)]
        model: Option<String>,
    },
    /// C^{1,1} seminorm ∫ g(t) dt/t² of a potential, g the L¹ norm of its
    /// centred second difference (regularity hypothesis of the absence of
    /// point spectrum theorem).
    C11,
    /// Hypotheses of the absence-of-point-spectrum theorem: C^{1,1}
    /// regularity, vanishing ∂ₓV, and the strict bounds T‖∂ₓV‖ < |φ₁(T)|,
    /// 2π‖∂ₓV‖ < |φ₂(T)|.
    #[command(name = "theorem-a")]
    TheoremA,
    /// Heisenberg couple e^{itA}Te^{−itA} = e^{it}T and T^{−n}AT^n − A = n
    /// on the interior window; `shift` uses the exact lattice shift.
    Heisenberg {
        /// `scenario` or `shift`.
        #[arg(long)]
        model: Option<String>,
    },
    /// Regularized resolvent family G_ε^±(z) built from the mollified
    /// potential: sup ε‖G⁺‖, sup (1−|z|²)‖G⁺‖ and the U_ε consistency margins.
    Regfamily {
        #[arg(long, allow_hyphen_values = true)]
        arc: Option<String>,
    },
    /// Every builtin scenario's expected-diagnostic checklist; per-scenario
    /// JSON plus `suite_summary.csv`. Exit 0 iff every check passes.
    Suite {
        /// Scenarios run concurrently.
        #[arg(long, allow_hyphen_values = true)]
        jobs: Option<i64>,
    },
}

fn apply_overrides(cfg: &mut RunConfig, common: &Common, command: &Command) {
    if let Some(s) = &common.scenario {
        cfg.scenario = Some(s.clone());
    }
    if let Some(p) = &common.potential {
        cfg.potential = Some(p.clone());
    }
    if let Some(n) = common.n_points {
        cfg.basis.get_or_insert_with(Default::default).n_points = Some(n);
    }
    if let Some(s) = common.seed {
        cfg.seed = Some(s);
    }
    if let Some(f) = common.format {
        cfg.format = Some(f);
    }
    match command {
        Command::Mourre { arc, generator } => {
            let m = cfg.mourre.get_or_insert_with(Default::default);
            if arc.is_some() {
                m.arc = arc.clone();
            }
            if generator.is_some() {
                m.generator = generator.clone();
            }
        }
        Command::Virial { observable: Some(o) } => cfg.virial.get_or_insert_with(Default::default).observable = Some(o.clone()),
        Command::Usmooth { model: Some(m) } => cfg.usmooth.get_or_insert_with(Default::default).model = Some(m.clone()),
        Command::Heisenberg { model: Some(m) } => cfg.heisenberg.get_or_insert_with(Default::default).model = Some(m.clone()),
        Command::Regfamily { arc: Some(a) } => cfg.regfamily.get_or_insert_with(Default::default).arc = Some(a.clone()),
        Command::Suite { jobs: Some(j) } => cfg.suite.get_or_insert_with(Default::default).jobs = Some(*j),
        _ => {}
    }
}

fn execute(cli: &Cli) -> Result<commands::Outcome, CliError> {
    let mut cfg = match &cli.common.config {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    apply_overrides(&mut cfg, &cli.common, &cli.command);
    let out = cli.common.output_dir.as_ref().map(|p| p.to_string_lossy().into_owned());
    let r = cfg.resolve(out.as_deref())?;
    match cli.command {
        Command::Spectrum => commands::spectrum(&r),
        Command::Mourre { .. } => commands::mourre(&r),
        Command::Virial { .. } => commands::virial(&r),
        Command::Resolvent => commands::resolvent(&r),
        Command::Density => commands::density(&r),
        Command::Usmooth { .. } => commands::usmooth(&r),
        Command::C11 => commands::c11(&r),
        Command::TheoremA => commands::theorem_a(&r),
        Command::Heisenberg { .. } => commands::heisenberg(&r),
        Command::Regfamily { .. } => commands::regfamily(&r),
        Command::Suite { .. } => commands::suite(&r),
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// exit code: 0 success, 1 failed checks, 2 bad input, 3 numerical failure.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(o) => {
            for f in &o.files {
                println!("wrote {}", f.display());
            }
            println!("{}", o.summary);
            if o.passed {
                EXIT_OK
            } else {
                eprintln!("error: {}", CliError::CheckFailed(o.summary.clone()));
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
