use polaron_core::bath::{mean_displacement, BathKernel};
use polaron_core::InputMode;
use polaron_sim::config::Config;
use polaron_sim::{presets, ConfigError, SimError};

const BASE: &str = r#"{
  "system": {"omega_ueV": 55.0, "g_c_ueV": 82.4, "delta_xl_ueV": -75.0, "delta_cl_ueV": -27.04, "kappa_ueV": 45.0},
  "phonons": {"T_K": 4.0}
}"#;

fn with(section: &str, key: &str, value: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(BASE).unwrap();
    v[section][key] = serde_json::from_str(value).unwrap();
    serde_json::to_string_pretty(&v).unwrap()
}

fn invalid_field(text: &str) -> String {
    match Config::from_json(text, "test") {
        Err(ConfigError::Invalid { field, .. }) => field,
        other => panic!("expected a field error, got {other:?}"),
    }
}

#[test]
fn bare_values_load_with_defaults() {
    let c = Config::from_json(BASE, "test").unwrap();
    let s = c.system_params();
    assert_eq!((s.omega, s.g_c), (55.0, 82.4));
    assert_eq!((s.gamma, s.gamma_prime, s.n_fock), (2.0, 0.5, 5));
    assert_eq!(s.input_mode, InputMode::Bare);
    let env = c.phonon_env();
    assert_eq!(
        (env.temperature, env.alpha_p, env.omega_b, env.enabled),
        (4.0, 0.06, 1000.0, true)
    );
    assert!(c.run.converge_truncation);
}

#[test]
fn disabled_phonons_switch_off_renormalization_and_rates() {
    let c = Config::from_json(&with("phonons", "enabled", "false"), "test").unwrap();
    let env = c.phonon_env();
    assert!(!env.enabled);
    assert_eq!(mean_displacement(&env).unwrap(), 1.0);
    let r = BathKernel::new(&env)
        .unwrap()
        .rates(&c.system_params())
        .unwrap();
    for v in [
        r.gamma_sigma_plus,
        r.gamma_sigma_minus,
        r.gamma_adag_sigma_minus,
        r.gamma_sigma_plus_a,
    ] {
        assert_eq!(v, 0.0);
    }
}

#[test]
fn negative_decay_names_the_field() {
    assert_eq!(
        invalid_field(&with("system", "gamma_ueV", "-1.0")),
        "system.gamma_ueV"
    );
}

#[test]
fn every_out_of_range_field_is_named() {
    let cases = [
        ("system", "omega_ueV", "-1.0"),
        ("system", "g_c_ueV", "-0.1"),
        ("system", "gamma_ueV", "-1.0"),
        ("system", "gamma_prime_ueV", "-2.0"),
        ("system", "kappa_ueV", "-45.0"),
        ("system", "n_fock", "1"),
        ("phonons", "alpha_p_ps2", "-0.06"),
        ("phonons", "omega_b_ueV", "0.0"),
        ("phonons", "T_K", "-4.0"),
        ("run", "points", "0"),
        ("run", "values", "[1.0, 1.0]"),
        ("run", "temperatures_K", "[]"),
        ("run", "contour_delta_xl_ueV", "[0.0, -10.0]"),
        ("run", "contour_points", "[61, 1]"),
    ];
    for (section, key, value) in cases {
        assert_eq!(
            invalid_field(&with(section, key, value)),
            format!("{section}.{key}"),
            "{key} = {value}"
        );
    }
}

#[test]
fn unknown_keys_are_rejected_with_context() {
    let text = BASE.replace("\"kappa_ueV\"", "\"kapa_ueV\"");
    match Config::from_json(&text, "typo.json") {
        Err(e @ ConfigError::Parse { .. }) => {
            let msg = e.to_string();
            assert!(msg.contains("kapa_ueV"), "{msg}");
            assert!(msg.starts_with("typo.json:"), "{msg}");
        }
        other => panic!("{other:?}"),
    }
    let text = with("run", "colour", "\"red\"");
    assert!(matches!(
        Config::from_json(&text, "t"),
        Err(ConfigError::Parse { .. })
    ));
}

#[test]
fn syntax_error_reports_the_line() {
    let text = BASE.replace("\"delta_cl_ueV\": -27.04,", "\"delta_cl_ueV\": -27.04,,");
    match Config::from_json(&text, "broken.json") {
        Err(ConfigError::Parse { line, context, .. }) => {
            assert_eq!(line, 2);
            assert!(context.contains("delta_cl_ueV"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let original = presets::load("fig4").unwrap().config;
    std::fs::write(&path, serde_json::to_string_pretty(&original).unwrap()).unwrap();
    assert_eq!(Config::load(&path).unwrap(), original);
    let missing = Config::load(&dir.path().join("absent.json")).unwrap_err();
    assert!(matches!(missing, ConfigError::Read { .. }));
    assert_eq!(SimError::from(missing).exit_code(), 2);
}

#[test]
fn presets_match_their_figure_recipes() {
    for name in ["fig3a", "fig3b", "fig4", "fig5", "fig7", "fig8"] {
        let c = presets::load(name).unwrap().config;
        let s = c.system_params();
        assert_eq!(s.input_mode, InputMode::Renormalized, "{name}");
        assert_eq!((s.omega, s.g_c, s.kappa), (50.0, 75.0, 45.0), "{name}");
    }
    assert_eq!(
        presets::load("fig8").unwrap().config.phonons.temperature_k,
        9.0
    );
    assert!(matches!(
        presets::load("fig6"),
        Err(ConfigError::UnknownPreset(_))
    ));
}
