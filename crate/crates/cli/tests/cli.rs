use std::collections::BTreeMap;
use std::path::Path;

use sha2::{Digest, Sha256};

use floquet_cli::config::{BasisConfig, FieldConfig, MourreConfig, SuiteConfig, WindowConfig, DEFAULT_OUTPUT_DIR};
use floquet_cli::{load_config, parse_json, parse_toml, run, save_config, CliError, Format, RunConfig, EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK};

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn argv(args: &[&str]) -> Vec<String> {
    std::iter::once("floquet").chain(args.iter().copied()).map(String::from).collect()
}

fn hashes(dir: &Path) -> BTreeMap<String, String> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            let bytes = std::fs::read(e.path()).unwrap();
            let h = Sha256::digest(&bytes);
            (e.file_name().to_string_lossy().into_owned(), h.iter().map(|b| format!("{b:02x}")).collect())
        })
        .collect()
}

#[test]
fn minimal_config_takes_defaults() {
    let cfg = parse_toml("scenario = \"RES_COS\"\n").unwrap();
    let r = cfg.resolve(None).unwrap();
    assert_eq!(r.named.name, "RES_COS");
    assert_eq!(r.named.scenario.basis.n_points, 512);
    assert_eq!(r.format, Format::Json);
    assert_eq!(r.seed, 0);
    assert_eq!(r.output_dir, Path::new(DEFAULT_OUTPUT_DIR));
    assert!(r.mourre_arc.full && r.mourre_use_interior);
    assert_eq!(r.suite_jobs, 1);
}

#[test]
fn negative_grid_size_names_its_key() {
    let cfg = parse_toml("scenario = \"RES_SIN\"\n[basis]\nn_points = -8\n").unwrap();
    let err = cfg.resolve(None).unwrap_err();
    assert!(matches!(err, CliError::Validation { .. }));
    assert_eq!(err.path(), Some("basis.n_points"));
    assert_eq!(err.exit_code(), EXIT_INPUT);
}

#[test]
fn unknown_keys_are_rejected_with_their_path() {
    let err = parse_toml("scenario = \"RES_SIN\"\n[mourre]\narcs = \"full\"\n").unwrap_err();
    assert!(matches!(err, CliError::Parse { .. }));
    assert_eq!(err.path(), Some("mourre.arcs"), "{err}");
    let err = parse_json(r#"{"basis": {"n_points": 64, "width": 3}}"#).unwrap_err();
    assert_eq!(err.path(), Some("basis.width"), "{err}");
}

#[test]
fn type_errors_point_into_nested_sections() {
    let err = parse_toml("[field]\nperiod = \"long\"\n").unwrap_err();
    assert_eq!(err.path(), Some("field.period"));
}

#[test]
fn bad_values_are_caught_at_validation() {
    let cases = [
        ("scenario = \"NOPE\"\n", "scenario"),
        ("potential = \"gaussian(1)\"\n", "potential"),
        ("[field]\ndrive = \"sin(1,2)\"\nperiod = 1.0\n", "field"),
        ("[mourre]\narc = \"0.1\"\n", "mourre.arc"),
        ("[mourre]\ngenerator = \"q\"\n", "mourre.generator"),
        ("[density]\nr = 1.5\n", "density.r"),
        ("[usmooth]\nmodel = \"walk\"\n", "usmooth.model"),
        ("[usmooth]\nn_max = 4\n", "usmooth.n_max"),
        ("[suite]\njobs = 0\n", "suite.jobs"),
        ("time_steps = 0\n", "time_steps"),
    ];
    for (text, path) in cases {
        let err = parse_toml(text).unwrap().resolve(None).unwrap_err();
        assert_eq!(err.path(), Some(path), "{text}: {err}");
    }
}

#[test]
fn save_then_load_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        scenario: Some("PERT_STRICT".into()),
        potential: Some("gaussian(0.2,1.5)".into()),
        time_steps: Some(64),
        seed: Some(7),
        format: Some(Format::Csv),
        output_dir: Some("runs/a".into()),
        basis: Some(BasisConfig { n_points: Some(128), half_width: Some(10.0), omega: None }),
        field: Some(FieldConfig { drive: Some("sin(1,1)".into()), period: Some(std::f64::consts::TAU) }),
        window: Some(WindowConfig { x_cut: 3.0, p_cut: 3.0, taper: Some(1.5) }),
        mourre: Some(MourreConfig { arc: Some("-1:1".into()), generator: Some("x".into()), use_interior: Some(false) }),
        suite: Some(SuiteConfig { jobs: Some(2), scenarios: Some(vec!["RES_SIN".into()]) }),
        ..RunConfig::default()
    };
    for name in ["run.toml", "run.json"] {
        let p = dir.path().join(name);
        save_config(&cfg, &p).unwrap();
        assert_eq!(load_config(&p).unwrap(), cfg, "{name}");
    }
    cfg.resolve(None).unwrap();
}

#[test]
fn output_dir_precedence() {
    let cfg = parse_toml("output_dir = \"from-file\"\n").unwrap();
    assert_eq!(cfg.resolve(None).unwrap().output_dir, Path::new("from-file"));
    assert_eq!(cfg.resolve(Some("from-env")).unwrap().output_dir, Path::new("from-env"));
}

#[test]
fn inline_scenario_without_a_name() {
    let text = "[basis]\nn_points = 64\nhalf_width = 8.0\n[field]\ndrive = \"cos(1,1)\"\n";
    let r = parse_toml(text).unwrap().resolve(None).unwrap();
    assert_eq!(r.named.name, "inline");
    assert!((r.named.scenario.period() - std::f64::consts::TAU).abs() < 1e-15);
    assert!(r.named.expected.is_empty());
}

#[test]
fn spectrum_writes_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let code = run(argv(&["spectrum", "--scenario", "RES_SIN", "--n-points", "128", "--format", "csv", "--output-dir", out]));
    assert_eq!(code, EXIT_OK);
    let text = std::fs::read_to_string(dir.path().join("spectrum_RES_SIN.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,phase,cluster,multiplicity"));
    assert_eq!(lines.count(), 128);
    assert!(!text.contains('\r'));
}

#[test]
fn mourre_on_the_strict_scenario_is_positive() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(run(argv(&["mourre", "--scenario", "PERT_STRICT", "--arc", "full", "--output-dir", out])), EXIT_OK);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("mourre_PERT_STRICT.json")).unwrap()).unwrap();
    assert!(v["report"]["strict_c"].as_f64().unwrap() > 0.0);
}

#[test]
fn c11_of_a_gaussian_converges() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(run(argv(&["c11", "--potential", "gaussian(1,1)", "--output-dir", out])), EXIT_OK);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("c11.json")).unwrap()).unwrap();
    assert_eq!(v["converged"], serde_json::Value::Bool(true));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(run(argv(&["frobnicate"])), EXIT_INPUT);
    assert_eq!(run(argv(&["spectrum", "--n-points", "-4", "--output-dir", out])), EXIT_INPUT);
    // The theorem check needs a potential; a translation generator needs resonance.
    assert_eq!(run(argv(&["theorem-a", "--scenario", "RES_SIN", "--output-dir", out])), EXIT_INPUT);
    assert_eq!(run(argv(&["mourre", "--scenario", "NONRES", "--output-dir", out])), EXIT_INPUT);
    let cfg = write(dir.path(), "bad.toml", "[basis]\nn_points = 64\nunknown = 1\n");
    assert_eq!(run(argv(&["spectrum", "--config", cfg.to_str().unwrap(), "--output-dir", out])), EXIT_INPUT);
    assert_eq!(run(argv(&["spectrum", "--config", "/nonexistent/run.toml"])), EXIT_INPUT);
    assert_eq!(run(argv(&["--help"])), EXIT_OK);
    assert_eq!(CliError::Core(floquet_core::Error::NoConvergence("x".into())).exit_code(), EXIT_NUMERICAL);
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let cfg = write(
        dir.path(),
        "run.toml",
        "scenario = \"RES_SIN\"\nformat = \"csv\"\n[basis]\nn_points = 64\n[heisenberg]\nmodel = \"shift\"\nt_grid = [0.25, 1.0]\n",
    );
    let code = run(argv(&["heisenberg", "--config", cfg.to_str().unwrap(), "--format", "json", "--output-dir", out.to_str().unwrap()]));
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("heisenberg_shift.json")).unwrap()).unwrap();
    assert!(v["couple"]["max_residual"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn suite_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(run(argv(&["suite", "--seed", "3", "--jobs", "3", "--output-dir", a.to_str().unwrap()])), EXIT_OK);
    assert_eq!(run(argv(&["suite", "--seed", "3", "--jobs", "1", "--output-dir", b.to_str().unwrap()])), EXIT_OK);
    let (ha, hb) = (hashes(&a), hashes(&b));
    assert_eq!(ha.len(), 7);
    assert_eq!(ha, hb);
}
