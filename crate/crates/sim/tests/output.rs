use polaron_core::{PhononEnv, SystemParams};
use polaron_sim::presets::{self, PanelSpec, TableKind};
use polaron_sim::run::{execute, plot_from_csv, write_outputs};
use polaron_sim::sweep::{run_rates_sweep, run_variance_sweep, Axis, SweepSpec};
use polaron_sim::{Command, SimError, Table};
use proptest::prelude::*;
use std::path::Path;

fn rates_table() -> Table {
    let sys = SystemParams::renormalized(50.0, 75.0, 0.0, 0.0, 45.0);
    let mut spec = SweepSpec::new(
        Axis::DetuningForRates,
        vec![-500.0, 0.0, 250.0],
        sys,
        PhononEnv::default(),
    );
    spec.series = vec![4.0, 10.0];
    run_rates_sweep(&spec).unwrap().to_table()
}

fn svg_markers(svg: &str) -> usize {
    let doc = roxmltree::Document::parse(svg).expect("well-formed SVG");
    doc.descendants()
        .filter(|n| n.attribute("class") == Some("marker"))
        .count()
}

#[test]
fn sweep_csv_round_trips_exactly() {
    let t = rates_table();
    let text = t.to_csv();
    assert!(!text.contains('\r'));
    assert_eq!(
        text.lines().next().unwrap(),
        "detuning_ueV,T_K,b_mean,gamma_sigma_plus_ueV,gamma_sigma_minus_ueV,gamma_adag_sigma_minus_ueV,gamma_sigma_plus_a_ueV"
    );
    let back = Table::from_csv(&text, Path::new("mem")).unwrap();
    assert_eq!(back.header, t.header);
    for (a, b) in back.rows.iter().zip(&t.rows) {
        assert!(a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}

proptest! {
    #[test]
    fn any_finite_table_round_trips(rows in prop::collection::vec(prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 3), 1..20)) {
        let mut t = Table::new(["a_ueV", "b", "c_K"]);
        for r in rows {
            t.push(r);
        }
        let back = Table::from_csv(&t.to_csv(), Path::new("mem")).unwrap();
        for (a, b) in back.rows.iter().zip(&t.rows) {
            prop_assert!(a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
    }
}

#[test]
fn single_row_sweep_draws_one_marker() {
    let sys = SystemParams::renormalized(50.0, 75.0, -75.0, 0.0, 45.0);
    let spec = SweepSpec::new(
        Axis::DeltaClOverScale,
        vec![-0.3],
        sys,
        PhononEnv::default(),
    );
    let table = run_variance_sweep(&spec).unwrap().to_table();
    let panel = PanelSpec::Line {
        name: "v".into(),
        title: "single point".into(),
        x: "delta_cl_over_scale".into(),
        y: vec!["variance_normord".into()],
        labels: vec!["variance".into()],
        x_label: "x".into(),
        y_label: "y".into(),
        dashed: vec![],
        split_by: None,
        split_label: None,
    };
    let svg = polaron_sim::plot::render_panel(&panel, &table).unwrap();
    assert_eq!(svg_markers(&svg), 1);
}

#[test]
fn empty_table_is_a_chart_error() {
    let panel = &presets::load("fig7").unwrap().panels[0];
    let empty = Table::new(["T_K", "variance_normord"]);
    assert!(matches!(
        polaron_sim::plot::render_panel(panel, &empty),
        Err(SimError::Chart(_))
    ));
}

#[test]
fn charts_are_deterministic_and_survive_the_csv() {
    let preset = presets::load("fig2a").unwrap();
    let mut config = preset.config.clone();
    config.run.points = 9;
    let output = execute(preset.command, &config).unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    write_outputs(a.path(), "fig2a", &output, &preset.panels).unwrap();
    write_outputs(b.path(), "fig2a", &output, &preset.panels).unwrap();
    let first = std::fs::read(a.path().join("fig2a_rates.svg")).unwrap();
    assert_eq!(
        first,
        std::fs::read(b.path().join("fig2a_rates.svg")).unwrap()
    );
    // redrawing from the written CSV gives the same bytes
    plot_from_csv(b.path(), "fig2a", &preset.panels).unwrap();
    assert_eq!(
        first,
        std::fs::read(b.path().join("fig2a_rates.svg")).unwrap()
    );
    let svg = String::from_utf8(first).unwrap();
    assert_eq!(svg_markers(&svg), 4 * 9);
}

#[test]
fn variance_preset_draws_two_curves() {
    let preset = presets::load("fig3b").unwrap();
    let mut config = preset.config.clone();
    config.run.points = 5;
    let output = execute(Command::Sweep, &config).unwrap();
    let svg =
        polaron_sim::plot::render_panel(&preset.panels[0], output.table(TableKind::Main).unwrap())
            .unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(
        doc.descendants()
            .filter(|n| n.has_tag_name("polyline"))
            .count(),
        2
    );
    assert!(svg.contains("with phonons") && svg.contains("without phonons"));
}

#[test]
fn fock_report_writes_long_form_coherences() {
    let preset = presets::load("fig5").unwrap();
    let output = execute(Command::Fock, &preset.config).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let written = write_outputs(dir.path(), "fig5", &output, &preset.panels).unwrap();
    let names: Vec<String> = written
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    for expected in [
        "fig5.csv",
        "fig5_populations.csv",
        "fig5_coherences.csv",
        "fig5_populations.svg",
        "fig5_coherences.svg",
    ] {
        assert!(names.iter().any(|n| n == expected), "{names:?}");
    }
    let text = std::fs::read_to_string(dir.path().join("fig5_coherences.csv")).unwrap();
    assert!(text.starts_with("n,m,re,im,abs\n0,0,"));
    let t = Table::from_csv(&text, Path::new("c")).unwrap();
    let n = t.column("n").unwrap().iter().fold(0.0f64, |a, &b| a.max(b)) as usize + 1;
    assert_eq!(t.rows.len(), n * n);
}
