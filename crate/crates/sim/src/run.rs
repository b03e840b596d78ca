//! From a configuration and a subcommand to tables, charts and a summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use polaron_core::bath::mean_displacement;
use polaron_core::{InputMode, SystemParams};

use crate::config::{linspace, Config};
use crate::error::{Result, SimError};
use crate::plot::render_panel;
use crate::presets::{Command, PanelSpec, TableKind};
use crate::sweep::{
    run_coherence_contour, run_fock_report, run_rates_sweep, run_temperature_sweep,
    run_variance_sweep, Axis, ContourSpec, SweepSpec,
};
use crate::table::Table;

/// Renormalized Rabi frequency at the configured bath temperature.
pub fn omega_r(config: &Config) -> Result<f64> {
    let sys = config.system_params();
    let b = match sys.input_mode {
        InputMode::Renormalized => 1.0,
        InputMode::Bare => mean_displacement(&config.phonon_env())
            .map_err(|e| SimError::numerical("mean displacement", e))?,
    };
    Ok(sys.omega_r(b))
}

/// System parameters with the scaled detuning directives applied: a single
/// `delta_xl_over_omega_r` entry sets Δ_xl, then `delta_cl_over_scale` sets
/// Δ_cl.
pub fn operating_point(config: &Config) -> Result<SystemParams> {
    let mut sys = config.system_params();
    let run = &config.run;
    if run.delta_cl_over_scale.is_none() && run.delta_xl_over_omega_r.is_none() {
        return Ok(sys);
    }
    let w = omega_r(config)?;
    if let Some(series) = &run.delta_xl_over_omega_r {
        if let [ratio] = series.as_slice() {
            sys.delta_xl = ratio * w;
        }
    }
    if let Some(s) = run.delta_cl_over_scale {
        sys.delta_cl = s * w.hypot(sys.delta_xl);
    }
    Ok(sys)
}

fn spec(config: &Config, default_axis: Axis, range: (f64, f64), system: SystemParams) -> SweepSpec {
    let mut s = SweepSpec::new(
        config.run.axis.unwrap_or(default_axis),
        config.run.axis_points(range.0, range.1),
        system,
        config.phonon_env(),
    );
    s.theta = config.run.theta_rad;
    s.converge_truncation = config.run.converge_truncation;
    s
}

pub fn rates_spec(config: &Config) -> SweepSpec {
    let mut s = spec(
        config,
        Axis::DetuningForRates,
        (-2000.0, 2000.0),
        config.system_params(),
    );
    s.series = config.run.temperatures_k.clone();
    s
}

pub fn variance_spec(config: &Config) -> SweepSpec {
    let axis = config.run.axis.unwrap_or(Axis::DeltaClOverScale);
    let range = if axis == Axis::DeltaXl {
        (-125.0, 0.0)
    } else {
        (-1.2, 0.2)
    };
    let mut s = spec(config, axis, range, config.system_params());
    s.series = config.run.delta_xl_over_omega_r.clone().unwrap_or_default();
    s
}

pub fn temperature_spec(config: &Config) -> Result<SweepSpec> {
    Ok(spec(
        config,
        Axis::Temperature,
        (0.0, 20.0),
        operating_point(config)?,
    ))
}

/// Default ranges Δ_xl ∈ [−2.5Ω_R, −0.25Ω_R], Δ_cl ∈ [−2.5Ω_R, 0].
pub fn contour_spec(config: &Config) -> Result<ContourSpec> {
    let run = &config.run;
    let w = omega_r(config)?;
    let [xl0, xl1] = run.contour_delta_xl_uev.unwrap_or([-2.5 * w, -0.25 * w]);
    let [cl0, cl1] = run.contour_delta_cl_uev.unwrap_or([-2.5 * w, 0.0]);
    Ok(ContourSpec {
        delta_xl: linspace(xl0, xl1, run.contour_points[0]),
        delta_cl: linspace(cl0, cl1, run.contour_points[1]),
        system: operating_point(config)?,
        phonons: config.phonon_env(),
        converge_truncation: run.converge_truncation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub tables: Vec<(TableKind, Table)>,
    /// Human-readable digest of the headline numbers.
    pub summary: String,
}

impl RunOutput {
    pub fn table(&self, kind: TableKind) -> Option<&Table> {
        self.tables.iter().find(|t| t.0 == kind).map(|t| &t.1)
    }
}

pub fn execute(command: Command, config: &Config) -> Result<RunOutput> {
    let mut summary = String::new();
    let tables = match command {
        Command::Rates => {
            let r = run_rates_sweep(&rates_spec(config))?;
            let _ = writeln!(
                summary,
                "rates at {} detunings for T = {:?} K",
                r.spec.points.len(),
                r.spec.series
            );
            vec![(TableKind::Main, r.to_table())]
        }
        Command::Sweep => {
            let r = run_variance_sweep(&variance_spec(config))?;
            let x = r.axis_values();
            if let Some(var) = r.column("variance_normord") {
                let groups: Vec<Option<f64>> = if r.spec.series.is_empty() {
                    vec![None]
                } else {
                    r.spec.series.iter().map(|&v| Some(v)).collect()
                };
                for value in groups {
                    let best = (0..r.rows.len())
                        .filter(|&i| r.rows[i].series == value)
                        .min_by(|&a, &b| var[a].total_cmp(&var[b]));
                    if let Some(i) = best {
                        let label = value.map_or(String::new(), |v| format!("Δ_xl = {v} Ω_R: "));
                        let _ = writeln!(
                            summary,
                            "{label}minimum variance {:.6e} at {} = {}",
                            var[i],
                            r.spec.axis.column(),
                            x[i]
                        );
                    }
                }
            }
            vec![(TableKind::Main, r.to_table())]
        }
        Command::TempSweep => {
            let r = run_temperature_sweep(&temperature_spec(config)?)?;
            match r.zero_crossing_k {
                Some(t) => {
                    let _ = writeln!(summary, "variance zero crossing at T = {t:.4} K");
                }
                None => {
                    let _ = writeln!(summary, "variance does not change sign over the grid");
                }
            }
            vec![(TableKind::Main, r.result.to_table())]
        }
        Command::Contour => {
            let r = run_coherence_contour(&contour_spec(config)?)?;
            let p = r.argmax;
            let _ = writeln!(
                summary,
                "max |⟨σ−⟩| = {:.6} at Δ_xl = {:.4} μeV, Δ_cl = {:.4} μeV",
                p.value, p.delta_xl, p.delta_cl
            );
            vec![(TableKind::Main, r.to_table())]
        }
        Command::Steady | Command::Fock => {
            let env = config.phonon_env();
            let r = run_fock_report(
                &operating_point(config)?,
                &env,
                config.run.theta_rad,
                config.run.converge_truncation,
            )?;
            let o = &r.observables;
            let _ = writeln!(
                summary,
                "T = {} K, ⟨B⟩ = {:.6}, Δ_xl = {:.4} μeV, Δ_cl = {:.4} μeV, N = {}",
                env.temperature, r.b_mean, r.system.delta_xl, r.system.delta_cl, r.n_fock_used
            );
            let _ = writeln!(
                summary,
                "⟨:ΔX²:⟩ = {:.6e}, ⟨a†a⟩ = {:.6e}, |⟨σ−⟩| = {:.6e}",
                o.variance_normord,
                o.exp_adag_a,
                o.exciton_coherence()
            );
            let pops: Vec<String> = r
                .populations()
                .iter()
                .take(4)
                .map(|p| format!("{p:.4}"))
                .collect();
            let _ = writeln!(summary, "P_n = ({}, ...)", pops.join(", "));
            let mut tables = vec![(TableKind::Main, r.summary_table())];
            if command == Command::Fock {
                tables.push((TableKind::Populations, r.populations_table()));
                tables.push((TableKind::Coherences, r.coherence_table()));
            }
            tables
        }
    };
    Ok(RunOutput { tables, summary })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| SimError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| SimError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Writes every table as `<stem>[_kind].csv` and every panel as
/// `<stem>_<panel>.svg`; returns the paths written.
pub fn write_outputs(
    dir: &Path,
    stem: &str,
    output: &RunOutput,
    panels: &[PanelSpec],
) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut written = Vec::new();
    for (kind, table) in &output.tables {
        let path = dir.join(kind.file_name(stem));
        table.write(&path)?;
        written.push(path);
    }
    for panel in panels {
        if let Some(t) = output.table(panel.table()) {
            let path = dir.join(format!("{stem}_{}.svg", panel.name()));
            write_file(&path, &render_panel(panel, t)?)?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Re-renders panels from CSV files previously written to `dir`.
pub fn plot_from_csv(dir: &Path, stem: &str, panels: &[PanelSpec]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for panel in panels {
        let table = Table::read(&dir.join(panel.table().file_name(stem)))?;
        let path = dir.join(format!("{stem}_{}.svg", panel.name()));
        write_file(&path, &render_panel(panel, &table)?)?;
        written.push(path);
    }
    Ok(written)
}
