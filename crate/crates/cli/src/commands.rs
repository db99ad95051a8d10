//! One function per subcommand. Each computes its report from a resolved
//! config, writes it under the output directory and says whether its checks
//! (if it has any) passed.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;
use serde_json::json;

use floquet_core::commutator::{c11_seminorm, InnerGrid};
use floquet_core::diagnostics::{
    boundary_trace, circle_grid, circle_trapezoid, default_smoothness_z_grid, geometric_radii, midpoint_angles, poisson_density, translation_model,
    usmooth_constants_with,
};
use floquet_core::lattice::{momentum_op, multiplication_op, position_op, FunctionDesc, GridBasis};
use floquet_core::linalg::random::random_unit_vector;
use floquet_core::linalg::{unitary_eig, ComplexMatrix, C64};
use floquet_core::mourre::{
    default_z_grid, eigen_count, floquet_mourre_report, floquet_operator, regularized_family, resonant_generator, theorem_a_criteria, virial_residuals, Arc,
};
use floquet_core::propagator::{translation_generator, Observable};
use floquet_core::scenarios::{
    builtin_scenarios, coordinate_frame, exact_shift_model, heisenberg_couple_check, ks_uniform_distance, run_checklist, scenario_by_name, NamedScenario,
    ScenarioChecklist,
};

use crate::config::{HeisenbergModel, Resolved, UsmoothModel, WavePacket};
use crate::error::CliError;
use crate::output::{csv_float, emit, summary_line, to_json, Table};

/// Half-width of the grid the `usmooth` translation model lives on.
pub const TRANSLATION_HALF_WIDTH: f64 = 12.0;

#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub passed: bool,
    pub summary: String,
}

fn done(files: Vec<PathBuf>, summary: String) -> Outcome {
    Outcome { files, passed: true, summary }
}

/// `exp(−(x−x0)²/2w² + i·p0·x)` on the grid, unit norm.
pub fn wave_packet(basis: &GridBasis, wp: &WavePacket) -> Result<Vec<C64>, CliError> {
    let v: Vec<C64> = basis.points().iter().map(|&x| C64::from_polar((-(x - wp.x0).powi(2) / (2.0 * wp.width * wp.width)).exp(), wp.p0 * x)).collect();
    let nv = floquet_core::linalg::norm(&v);
    if !(nv > 0.0 && nv.is_finite()) {
        return Err(CliError::Validation { path: "state".into(), message: "wave packet vanishes on the grid".into() });
    }
    Ok(v.iter().map(|z| z / nv).collect())
}

fn stem(cmd: &str, ns: &NamedScenario) -> String {
    format!("{cmd}_{}", ns.name)
}

fn write<T: Serialize>(r: &Resolved, stem: &str, report: &T, table: Option<&Table>) -> Result<PathBuf, CliError> {
    emit(&r.output_dir, stem, r.format, &to_json(report)?, table)
}

pub fn spectrum(r: &Resolved) -> Result<Outcome, CliError> {
    let ns = &r.named;
    let u = floquet_operator(&ns.scenario)?;
    let dec = unitary_eig(&u, r.cluster_tol)?;
    let frame = ns.window.frame()?;
    let localized = eigen_count(&dec, &Arc::full(), Some(&frame))?;
    let n = dec.dim();
    let ks = ks_uniform_distance(&dec.phases);
    let cluster_phases: Vec<f64> = (0..dec.clusters.len()).map(|c| dec.cluster_phase(c)).collect();
    let report = json!({
        "scenario": ns.name,
        "n_points": n,
        "cluster_tol": dec.cluster_tol,
        "residual_tol": dec.residual_tol,
        "phases": dec.phases,
        "clusters": dec.clusters,
        "cluster_phases": cluster_phases,
        "localized": localized,
        "ks_distance": ks,
        "ks_bound": 3.0 / (n as f64).sqrt(),
    });
    let mut t = Table::new(&["index", "phase", "cluster", "multiplicity"]);
    for (c, idx) in dec.clusters.iter().enumerate() {
        for &j in idx {
            t.push(vec![j.to_string(), csv_float(dec.phases[j]), c.to_string(), idx.len().to_string()]);
        }
    }
    t.rows.sort_by_key(|row| row[0].parse::<usize>().unwrap_or(0));
    let f = write(r, &stem("spectrum", ns), &report, Some(&t))?;
    Ok(done(vec![f], format!("{n} eigenphases in {} clusters, {} localized", dec.clusters.len(), localized.count)))
}

pub fn mourre(r: &Resolved) -> Result<Outcome, CliError> {
    let ns = &r.named;
    let s = &ns.scenario;
    let gen = match r.mourre_generator {
        None => resonant_generator(s)?,
        Some(which) => translation_generator(&s.phases_at_period()?, s.omega(), which)?,
    };
    let a = gen.matrix(&s.basis);
    let frame = if r.mourre_use_interior { ns.window.frame()? } else { ComplexMatrix::identity(s.basis.n_points) };
    let rep = floquet_mourre_report(s, &a, &r.mourre_arc, &frame)?;
    let summary = format!("strict_c {:.6} on {} (range dimension {})", rep.strict_c, rep.arc, rep.dim_range);
    let report = json!({ "scenario": ns.name, "generator": gen, "use_interior": r.mourre_use_interior, "report": rep });
    let f = write(r, &stem("mourre", ns), &report, None)?;
    Ok(done(vec![f], summary))
}

pub fn virial(r: &Resolved) -> Result<Outcome, CliError> {
    let ns = &r.named;
    let u = floquet_operator(&ns.scenario)?;
    let dec = unitary_eig(&u, r.cluster_tol)?;
    let a = match r.virial_observable {
        Observable::X => position_op(&ns.scenario.basis),
        Observable::P => momentum_op(&ns.scenario.basis),
    };
    let res = virial_residuals(&u, &a, &dec)?;
    let bad = res.iter().filter(|v| !v.within_bound()).count();
    let mut t = Table::new(&["cluster", "phase", "multiplicity", "max_residual", "bound", "max_eigen_residual", "cluster_norm"]);
    for v in &res {
        let max = |xs: &[f64]| xs.iter().copied().fold(0.0, f64::max);
        t.push(vec![
            v.cluster.to_string(),
            csv_float(v.phase),
            v.per_vector.len().to_string(),
            csv_float(max(&v.per_vector)),
            csv_float(v.bound),
            csv_float(max(&v.eigen_residuals)),
            csv_float(v.cluster_norm),
        ]);
    }
    let report = json!({ "scenario": ns.name, "observable": r.virial_observable, "violations": bad, "clusters": res });
    let f = write(r, &stem("virial", ns), &report, Some(&t))?;
    Ok(Outcome { files: vec![f], passed: bad == 0, summary: format!("{bad} of {} clusters above the residual bound", res.len()) })
}

pub fn resolvent(r: &Resolved) -> Result<Outcome, CliError> {
    let ns = &r.named;
    let u = floquet_operator(&ns.scenario)?;
    let dec = unitary_eig(&u, r.cluster_tol)?;
    let count = r.resolvent_theta_count;
    let thetas = midpoint_angles(&dec.phases, 0.0, PI * (1.0 - 1.0 / count as f64), count);
    let rs = geometric_radii(r.resolvent_r_ratio, r.resolvent_r_count);
    let phi = wave_packet(&ns.scenario.basis, &r.resolvent_state)?;
    let trace = boundary_trace(&u, &phi, &phi, &thetas, &rs)?;
    let floors: Vec<f64> = (0..thetas.len()).map(|j| trace.cauchy_floor(j)).collect();
    let mut t = Table::new(&["theta", "r", "re_inside", "im_inside", "re_outside", "im_outside", "cauchy_gap"]);
    for (j, &th) in thetas.iter().enumerate() {
        for (k, &rad) in rs.iter().enumerate() {
            let (fi, fo) = (trace.values_inside[j][k], trace.values_outside[j][k]);
            let gap = trace.cauchy_gaps[j].get(k).copied().unwrap_or(f64::NAN);
            t.push(vec![csv_float(th), csv_float(rad), csv_float(fi.re), csv_float(fi.im), csv_float(fo.re), csv_float(fo.im), csv_float(gap)]);
        }
    }
    let summary = format!("mean Cauchy floor {:.3e} over {} angles", trace.mean_cauchy_floor(), thetas.len());
    let report = json!({
        "scenario": ns.name,
        "mean_cauchy_floor": trace.mean_cauchy_floor(),
        "cauchy_floors": floors,
        "trace": trace,
    });
    let f = write(r, &stem("resolvent", ns), &report, Some(&t))?;
    Ok(done(vec![f], summary))
}

pub fn density(r: &Resolved) -> Result<Outcome, CliError> {
    let ns = &r.named;
    let u = floquet_operator(&ns.scenario)?;
    let thetas = circle_grid(r.density_theta_count);
    let phi = wave_packet(&ns.scenario.basis, &r.density_state)?;
    let d = poisson_density(&u, &phi, &thetas, r.density_r)?;
    let mass = circle_trapezoid(&d);
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    let mut t = Table::new(&["theta", "density"]);
    for (th, v) in thetas.iter().zip(&d) {
        t.push(vec![csv_float(*th), csv_float(*v)]);
    }
    let report = json!({
        "scenario": ns.name,
        "r": r.density_r,
        "mass": mass,
        "norm_sq": 1.0,
        "min_density": min,
        "theta": thetas,
        "density": d,
    });
    let f = write(r, &stem("density", ns), &report, Some(&t))?;
    Ok(done(vec![f], format!("mass {mass:.12} (state norm 1), min density {min:.3e}")))
}

pub fn usmooth(r: &Resolved) -> Result<Outcome, CliError> {
    let (basis, u, label) = match &r.usmooth_model {
        UsmoothModel::Translation { n_points, shift_fraction } => {
            let b = GridBasis::new(*n_points, TRANSLATION_HALF_WIDTH, 1.0)
                .map_err(|e| CliError::Validation { path: "usmooth.n_points".into(), message: e.to_string() })?;
            let u = translation_model(&b, shift_fraction * b.spacing());
            (b, u, "translation".to_string())
        }
        UsmoothModel::Scenario => {
            let s = &r.named.scenario;
            (s.basis.clone(), floquet_operator(s)?, r.named.name.clone())
        }
    };
    let n = basis.n_points;
    let b = multiplication_op(&basis, &FunctionDesc::Bump { a: 1.0, w: r.usmooth_bump_width })?;
    let samples: Vec<Vec<C64>> = (0..r.usmooth_samples).map(|k| random_unit_vector(n, r.seed.wrapping_add(k as u64))).collect();
    let n_max = r.usmooth_n_max.unwrap_or(4 * n);
    let dec = unitary_eig(&u, r.cluster_tol)?;
    let rep = usmooth_constants_with(&dec, &u, &b, &samples, n_max, &default_smoothness_z_grid())?;
    let summary = format!("C1 {:.4} C2 {:.4} C3 {:.4} C4 {:.4} C5 {:.4}, spread {:.3}", rep.c1_truncated, rep.c2, rep.c3, rep.c4, rep.c5, rep.agreement_spread);
    let report = json!({ "model": label, "n_points": n, "bump_width": r.usmooth_bump_width, "seed": r.seed, "report": rep });
    let f = emit(&r.output_dir, &format!("usmooth_{label}"), r.format, &report, None)?;
    Ok(done(vec![f], summary))
}

fn potential(r: &Resolved) -> Result<&FunctionDesc, CliError> {
    r.named.scenario.potential.as_ref().ok_or_else(|| CliError::Validation { path: "potential".into(), message: "this command needs a potential".into() })
}

pub fn c11(r: &Resolved) -> Result<Outcome, CliError> {
    let v = potential(r)?;
    let grid = InnerGrid { half_width: r.c11_half_width, points: r.c11_points };
    let sem = c11_seminorm(v, r.c11_t_min, &grid)?;
    let summary = format!("seminorm {:.8e}, converged {}", sem.value, sem.converged);
    let report = json!({ "potential": v.to_string(), "value": sem.value, "converged": sem.converged, "seminorm": sem });
    let f = emit(&r.output_dir, "c11", r.format, &report, None)?;
    Ok(done(vec![f], summary))
}

pub fn theorem_a(r: &Resolved) -> Result<Outcome, CliError> {
    let ns = &r.named;
    potential(r)?;
    let ta = theorem_a_criteria(&ns.scenario)?;
    let summary = format!(
        "c11 {}, vanishing derivative {}, strict margins ({:.4}, {:.4})",
        ta.hypothesis_c11.satisfied, ta.vanishing_derivative, ta.strict_bound_1, ta.strict_bound_2
    );
    let report = json!({ "scenario": ns.name, "criteria": ta });
    let f = write(r, &stem("theorem-a", ns), &report, None)?;
    Ok(done(vec![f], summary))
}

pub fn heisenberg(r: &Resolved) -> Result<Outcome, CliError> {
    let (t_op, a, frame, label) = match r.heisenberg_model {
        HeisenbergModel::Shift => {
            let n = r.named.scenario.basis.n_points;
            let (s, a) = exact_shift_model(n);
            (s, a, coordinate_frame(n, n / 4, 3 * n / 4), "shift".to_string())
        }
        HeisenbergModel::Scenario => {
            let s = &r.named.scenario;
            (floquet_operator(s)?, resonant_generator(s)?.matrix(&s.basis), r.named.window.frame()?, r.named.name.clone())
        }
    };
    let couple = heisenberg_couple_check(&t_op, &a, &r.heisenberg_t_grid, &frame)?;
    let n = t_op.rows();
    let ks = match r.heisenberg_model {
        HeisenbergModel::Scenario => Some(ks_uniform_distance(&unitary_eig(&t_op, r.cluster_tol)?.phases)),
        HeisenbergModel::Shift => None,
    };
    let summary = format!("max residual {:.3e}", couple.max_residual);
    let report = json!({
        "model": label,
        "t_grid": r.heisenberg_t_grid,
        "couple": couple,
        "ks_distance": ks,
        "ks_bound": 3.0 / (n as f64).sqrt(),
    });
    let f = emit(&r.output_dir, &format!("heisenberg_{label}"), r.format, &report, None)?;
    Ok(done(vec![f], summary))
}

pub fn regfamily(r: &Resolved) -> Result<Outcome, CliError> {
    let ns = &r.named;
    potential(r)?;
    let a = resonant_generator(&ns.scenario)?.matrix(&ns.scenario.basis);
    let frame = ns.window.frame()?;
    let rep = regularized_family(&ns.scenario, &a, &frame, &r.regfamily_epsilon_grid, &default_z_grid(&r.regfamily_arc))?;
    let summary = format!("sup ε‖G⁺‖ {:.4}, sup (1−|z|²)‖G⁺‖ {:.4}", rep.fitted_c_eps, rep.fitted_c_z);
    let report = json!({ "scenario": ns.name, "arc": r.regfamily_arc, "report": rep });
    let f = write(r, &stem("regfamily", ns), &report, None)?;
    Ok(done(vec![f], summary))
}

/// Every selected builtin scenario's checklist, at most `jobs` at a time.
/// Results are gathered by scenario index, so file contents do not depend
/// on scheduling.
pub fn suite(r: &Resolved) -> Result<Outcome, CliError> {
    let scenarios: Vec<NamedScenario> = match &r.suite_scenarios {
        None => builtin_scenarios(),
        Some(names) => names
            .iter()
            .enumerate()
            .map(|(i, n)| scenario_by_name(n).map_err(|e| CliError::Validation { path: format!("suite.scenarios[{i}]"), message: e.to_string() }))
            .collect::<Result<_, _>>()?,
    };
    let slots: Vec<Mutex<Option<floquet_core::Result<ScenarioChecklist>>>> = scenarios.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = r.suite_jobs.min(scenarios.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(ns) = scenarios.get(i) else { break };
                let res = run_checklist(ns, r.seed);
                *slots[i].lock().expect("slot lock") = Some(res);
            });
        }
    });

    let mut files = Vec::new();
    let mut summary = String::new();
    summary_line(&mut summary, &["scenario", "diagnostic", "expectation", "passed", "detail"]);
    let mut failed = Vec::new();
    for (ns, slot) in scenarios.iter().zip(slots) {
        let cl = slot.into_inner().expect("slot lock").expect("every scenario ran")?;
        files.push(emit(&r.output_dir, &format!("suite_{}", ns.name), crate::config::Format::Json, &to_json(&cl)?, None)?);
        for c in &cl.checks {
            summary_line(&mut summary, &[&cl.scenario, c.diagnostic.name(), &c.expectation.to_string(), if c.passed { "pass" } else { "fail" }, &c.detail]);
            if !c.passed {
                failed.push(format!("{}/{}", cl.scenario, c.diagnostic));
            }
        }
    }
    std::fs::create_dir_all(&r.output_dir).map_err(|e| CliError::Io(e.to_string()))?;
    let path = r.output_dir.join("suite_summary.csv");
    std::fs::write(&path, &summary).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    files.push(path);
    let passed = failed.is_empty();
    let msg = if passed { format!("all checks passed on {} scenarios", scenarios.len()) } else { format!("failed: {}", failed.join(", ")) };
    Ok(Outcome { files, passed, summary: msg })
}
