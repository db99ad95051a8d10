use proptest::prelude::*;

use floquet_cli::config::{BasisConfig, FieldConfig, WindowConfig};
use floquet_cli::{load_config, save_config, Format, RunConfig};

fn run_config() -> impl Strategy<Value = RunConfig> {
    (
        proptest::option::of(prop::sample::select(vec!["RES_SIN", "RES_COS", "NONRES", "PERT_STRICT"])),
        proptest::option::of(1i64..4096),
        proptest::option::of(any::<u64>()),
        proptest::option::of(prop::bool::ANY),
        proptest::option::of((proptest::option::of(1i64..4096), proptest::option::of(0.1f64..100.0), proptest::option::of(0.1f64..10.0))),
        proptest::option::of(0.1f64..50.0),
        proptest::option::of((0.0f64..20.0, 0.0f64..20.0, proptest::option::of(0.0f64..5.0))),
    )
        .prop_map(|(scenario, steps, seed, csv, basis, period, window)| RunConfig {
            scenario: scenario.map(String::from),
            time_steps: steps,
            seed,
            format: csv.map(|c| if c { Format::Csv } else { Format::Json }),
            basis: basis.map(|(n, l, w)| BasisConfig { n_points: n, half_width: l, omega: w }),
            field: period.map(|p| FieldConfig { drive: Some("sin(1,1)".into()), period: Some(p) }),
            window: window.map(|(x_cut, p_cut, taper)| WindowConfig { x_cut, p_cut, taper }),
            ..RunConfig::default()
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn saved_configs_load_back_unchanged(cfg in run_config()) {
        let dir = tempfile::tempdir().unwrap();
        for name in ["run.toml", "run.json"] {
            let p = dir.path().join(name);
            if name.ends_with(".toml") && cfg.seed.is_some_and(|s| s > i64::MAX as u64) {
                let err = save_config(&cfg, &p).unwrap_err();
                prop_assert_eq!(err.path(), Some("seed"));
                continue;
            }
            save_config(&cfg, &p).unwrap();
            prop_assert_eq!(&load_config(&p).unwrap(), &cfg, "{}", name);
        }
    }
}
