//! Grid runners. Points are solved independently and collected in input
//! order, so results do not depend on the number of worker threads.

use polaron_core::bath::BathKernel;
use polaron_core::liouvillian::assemble_with_kernel;
use polaron_core::solver::{converge_truncation_with_kernel, steady_state};
use polaron_core::{
    DMatrix, ObservableSet, PhononEnv, PhononRates, PhononScattering, SteadyStateResult,
    SystemParams, C64,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::check_monotone;
use crate::error::{ConfigError, Result, SimError};
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Δ_cl in units of √(Ω_R² + Δ_xl²).
    DeltaClOverScale,
    /// Δ_xl in μeV.
    DeltaXl,
    /// Bath temperature in K.
    Temperature,
    /// Δ_lx = Δ_cx in μeV.
    DetuningForRates,
}

impl Axis {
    pub fn column(self) -> &'static str {
        match self {
            Axis::DeltaClOverScale => "delta_cl_over_scale",
            Axis::DeltaXl => "delta_xl_ueV",
            Axis::Temperature => "T_K",
            Axis::DetuningForRates => "detuning_ueV",
        }
    }
}

/// Observables recorded by [`run_variance_sweep`].
pub const VARIANCE_COLUMNS: [&str; 9] = [
    "delta_xl_ueV",
    "delta_cl_ueV",
    "variance_normord",
    "variance_normord_no_phonons",
    "exp_adag_a",
    "exp_a_exp_adag",
    "incoherent_number",
    "anomalous_re",
    "sigma_minus_abs",
];

/// Observables recorded by [`run_rates_sweep`].
pub const RATE_COLUMNS: [&str; 5] = [
    "b_mean",
    "gamma_sigma_plus_ueV",
    "gamma_sigma_minus_ueV",
    "gamma_adag_sigma_minus_ueV",
    "gamma_sigma_plus_a_ueV",
];

/// Observables recorded by [`run_temperature_sweep`].
pub const TEMPERATURE_COLUMNS: [&str; 5] = [
    "b_mean",
    "delta_cl_ueV",
    "variance_normord",
    "sigma_minus_abs",
    "exp_adag_a",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub points: Vec<f64>,
    /// Values of the series parameter: bath temperatures (K) for rate
    /// sweeps, Δ_xl/Ω_R for variance sweeps. Empty means one series taken
    /// from `system`.
    pub series: Vec<f64>,
    pub system: SystemParams,
    pub phonons: PhononEnv,
    /// Observable columns to keep; empty keeps all.
    pub recorded: Vec<String>,
    pub theta: f64,
    pub converge_truncation: bool,
}

impl SweepSpec {
    pub fn new(axis: Axis, points: Vec<f64>, system: SystemParams, phonons: PhononEnv) -> Self {
        Self {
            axis,
            points,
            series: Vec::new(),
            system,
            phonons,
            recorded: Vec::new(),
            theta: 0.0,
            converge_truncation: true,
        }
    }

    fn check(&self, expected: &[Axis], known: &[&str]) -> Result<()> {
        if !expected.contains(&self.axis) {
            return Err(ConfigError::invalid(
                "run.axis",
                self.axis.column(),
                format!("one of {expected:?}"),
            )
            .into());
        }
        check_monotone("run.values", &self.points)?;
        if let Some(bad) = self.recorded.iter().find(|r| !known.contains(&r.as_str())) {
            return Err(ConfigError::invalid("recorded", bad, format!("one of {known:?}")).into());
        }
        self.system
            .validate()
            .map_err(|e| SimError::numerical("fixed parameters", e.into()))?;
        self.phonons
            .validate()
            .map_err(|e| SimError::numerical("fixed parameters", e.into()))?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub series: Option<f64>,
    /// Aligned with [`SweepResult::columns`].
    pub values: Vec<f64>,
    /// Absent for rows that involve no steady-state solve.
    pub n_fock_used: Option<usize>,
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub series_column: Option<&'static str>,
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    fn assemble(
        spec: &SweepSpec,
        series_column: Option<&'static str>,
        all: &[&str],
        rows: Vec<SweepRow>,
    ) -> Self {
        let keep: Vec<usize> = if spec.recorded.is_empty() {
            (0..all.len()).collect()
        } else {
            (0..all.len())
                .filter(|&i| spec.recorded.iter().any(|r| r == all[i]))
                .collect()
        };
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.values = keep.iter().map(|&i| r.values[i]).collect();
                r
            })
            .collect();
        Self {
            spec: spec.clone(),
            series_column,
            columns: keep.iter().map(|&i| all[i].to_string()).collect(),
            rows,
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }

    pub fn axis_values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.axis_value).collect()
    }

    /// Rows belonging to one series value.
    pub fn series_rows(&self, value: f64) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.series == Some(value))
    }

    pub fn to_table(&self) -> Table {
        let solved = self.rows.first().is_some_and(|r| r.n_fock_used.is_some());
        let mut header = vec![self.spec.axis.column().to_string()];
        header.extend(self.series_column.map(str::to_string));
        header.extend(self.columns.iter().cloned());
        if solved {
            header.extend(["n_fock_used".to_string(), "residual".to_string()]);
        }
        let mut t = Table::new(header);
        for r in &self.rows {
            let mut row = vec![r.axis_value];
            if self.series_column.is_some() {
                row.push(r.series.unwrap_or(f64::NAN));
            }
            row.extend(&r.values);
            if solved {
                row.push(r.n_fock_used.unwrap_or(0) as f64);
                row.push(r.residual.unwrap_or(f64::NAN));
            }
            t.push(row);
        }
        t
    }
}

/// Steady state at one point, with or without the Fock convergence loop.
pub fn solve_point(
    sys: &SystemParams,
    kernel: &BathKernel,
    scattering: PhononScattering,
    converge: bool,
) -> polaron_core::Result<SteadyStateResult> {
    if converge {
        converge_truncation_with_kernel(sys, kernel, scattering)
    } else {
        steady_state(&assemble_with_kernel(sys, kernel, scattering)?)
    }
}

fn kernel(env: &PhononEnv) -> Result<BathKernel> {
    BathKernel::new(env)
        .map_err(|e| SimError::numerical(format!("bath kernel at T = {} K", env.temperature), e))
}

fn par_map<T: Sync, R: Send>(
    items: &[T],
    f: impl Fn(&T) -> Result<R> + Sync + Send,
) -> Result<Vec<R>> {
    items.par_iter().map(f).collect()
}

/// Incoherent phonon rates against a common detuning Δ = Δ_lx = Δ_cx, one
/// series per bath temperature.
pub fn run_rates_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.check(&[Axis::DetuningForRates], &RATE_COLUMNS)?;
    let temperatures = if spec.series.is_empty() {
        vec![spec.phonons.temperature]
    } else {
        spec.series.clone()
    };
    let mut rows = Vec::with_capacity(temperatures.len() * spec.points.len());
    for &t in &temperatures {
        let k = kernel(&spec.phonons.with_temperature(t))?;
        let b = k.b_mean();
        rows.extend(par_map(&spec.points, |&detuning| {
            let sys = SystemParams {
                delta_xl: -detuning,
                delta_cl: 0.0,
                ..spec.system
            };
            let r: PhononRates = k.rates(&sys).map_err(|e| {
                SimError::numerical(format!("rates at Δ = {detuning} μeV, T = {t} K"), e)
            })?;
            Ok(SweepRow {
                axis_value: detuning,
                series: Some(t),
                values: vec![
                    b,
                    r.gamma_sigma_plus,
                    r.gamma_sigma_minus,
                    r.gamma_adag_sigma_minus,
                    r.gamma_sigma_plus_a,
                ],
                n_fock_used: None,
                residual: None,
            })
        })?);
    }
    Ok(SweepResult::assemble(
        spec,
        Some("T_K"),
        &RATE_COLUMNS,
        rows,
    ))
}

/// Cavity observables against Δ_cl (scaled) or Δ_xl, with and without
/// exciton-phonon coupling.
pub fn run_variance_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.check(&[Axis::DeltaClOverScale, Axis::DeltaXl], &VARIANCE_COLUMNS)?;
    if spec.axis == Axis::DeltaXl && !spec.series.is_empty() {
        return Err(ConfigError::invalid(
            "run.delta_xl_over_omega_r",
            "set",
            "unused when sweeping delta_xl",
        )
        .into());
    }
    let on = kernel(&spec.phonons)?;
    let off = kernel(&PhononEnv {
        enabled: false,
        ..spec.phonons
    })?;
    let omega_r = spec.system.omega_r(on.b_mean());
    let series: Vec<Option<f64>> = if spec.series.is_empty() {
        vec![None]
    } else {
        spec.series.iter().copied().map(Some).collect()
    };
    let mut rows = Vec::new();
    for s in series {
        let base = match s {
            Some(ratio) => SystemParams {
                delta_xl: ratio * omega_r,
                ..spec.system
            },
            None => spec.system,
        };
        rows.extend(par_map(&spec.points, |&x| {
            let sys = match spec.axis {
                Axis::DeltaClOverScale => SystemParams {
                    delta_cl: x * omega_r.hypot(base.delta_xl),
                    ..base
                },
                _ => SystemParams {
                    delta_xl: x,
                    ..base
                },
            };
            let at = || format!("Δ_xl = {} μeV, Δ_cl = {} μeV", sys.delta_xl, sys.delta_cl);
            let with = solve_point(
                &sys,
                &on,
                PhononScattering::Included,
                spec.converge_truncation,
            )
            .map_err(|e| SimError::numerical(at(), e))?;
            let without = solve_point(
                &sys,
                &off,
                PhononScattering::Included,
                spec.converge_truncation,
            )
            .map_err(|e| SimError::numerical(format!("{} without phonons", at()), e))?;
            let o = ObservableSet::compute(&with.rho, spec.theta);
            let o_off = ObservableSet::compute(&without.rho, spec.theta);
            Ok(SweepRow {
                axis_value: x,
                series: s,
                values: vec![
                    sys.delta_xl,
                    sys.delta_cl,
                    o.variance_normord,
                    o_off.variance_normord,
                    o.exp_adag_a,
                    o.coherent_number(),
                    o.incoherent_number(),
                    o.anomalous(),
                    o.exciton_coherence(),
                ],
                n_fock_used: Some(with.n_fock_used),
                residual: Some(with.residual.max(without.residual)),
            })
        })?);
    }
    let series_column = (!spec.series.is_empty()).then_some("delta_xl_over_omega_r");
    Ok(SweepResult::assemble(
        spec,
        series_column,
        &VARIANCE_COLUMNS,
        rows,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureSweep {
    pub result: SweepResult,
    /// Where the variance first changes sign, by linear interpolation.
    pub zero_crossing_k: Option<f64>,
}

/// Observables against bath temperature. In renormalized input mode Ω_R and
/// g_R stay fixed while the bare values follow ⟨B⟩(T).
pub fn run_temperature_sweep(spec: &SweepSpec) -> Result<TemperatureSweep> {
    spec.check(&[Axis::Temperature], &TEMPERATURE_COLUMNS)?;
    if spec.points.iter().any(|&t| t < 0.0) {
        return Err(ConfigError::invalid(
            "run.values",
            format!("{:?}", spec.points),
            "temperatures >= 0",
        )
        .into());
    }
    let rows = par_map(&spec.points, |&t| {
        let k = kernel(&spec.phonons.with_temperature(t))?;
        let r = solve_point(
            &spec.system,
            &k,
            PhononScattering::Included,
            spec.converge_truncation,
        )
        .map_err(|e| SimError::numerical(format!("T = {t} K"), e))?;
        let o = ObservableSet::compute(&r.rho, spec.theta);
        Ok(SweepRow {
            axis_value: t,
            series: None,
            values: vec![
                k.b_mean(),
                spec.system.delta_cl,
                o.variance_normord,
                o.exciton_coherence(),
                o.exp_adag_a,
            ],
            n_fock_used: Some(r.n_fock_used),
            residual: Some(r.residual),
        })
    })?;
    let result = SweepResult::assemble(spec, None, &TEMPERATURE_COLUMNS, rows);
    let variance: Vec<f64> = result.rows.iter().map(|r| r.values[2]).collect();
    let zero_crossing_k = if spec.recorded.is_empty() {
        zero_crossing(&spec.points, &variance)
    } else {
        None
    };
    Ok(TemperatureSweep {
        result,
        zero_crossing_k,
    })
}

/// First sign change of `ys`, located by linear interpolation in `xs`.
pub fn zero_crossing(xs: &[f64], ys: &[f64]) -> Option<f64> {
    xs.windows(2).zip(ys.windows(2)).find_map(|(x, y)| {
        if y[0] == 0.0 {
            return Some(x[0]);
        }
        ((y[0] < 0.0) != (y[1] < 0.0)).then(|| x[0] + (x[1] - x[0]) * y[0] / (y[0] - y[1]))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourSpec {
    pub delta_xl: Vec<f64>,
    pub delta_cl: Vec<f64>,
    pub system: SystemParams,
    pub phonons: PhononEnv,
    pub converge_truncation: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPeak {
    pub delta_xl: f64,
    pub delta_cl: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourResult {
    pub delta_xl: Vec<f64>,
    pub delta_cl: Vec<f64>,
    /// |⟨σ⁻⟩|, row `i` holding Δ_xl[i] against every Δ_cl.
    pub coherence: Vec<f64>,
    pub n_fock_used: Vec<usize>,
    pub residual: Vec<f64>,
    pub argmax: ContourPeak,
}

impl ContourResult {
    pub fn at(&self, i_xl: usize, j_cl: usize) -> f64 {
        self.coherence[i_xl * self.delta_cl.len() + j_cl]
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new([
            "delta_xl_ueV",
            "delta_cl_ueV",
            "sigma_minus_abs",
            "n_fock_used",
            "residual",
        ]);
        let ncl = self.delta_cl.len();
        for (k, &c) in self.coherence.iter().enumerate() {
            let (i, j) = (k / ncl, k % ncl);
            t.push(vec![
                self.delta_xl[i],
                self.delta_cl[j],
                c,
                self.n_fock_used[k] as f64,
                self.residual[k],
            ]);
        }
        t
    }
}

/// |⟨σ⁻⟩| over a Δ_xl × Δ_cl grid.
pub fn run_coherence_contour(spec: &ContourSpec) -> Result<ContourResult> {
    check_monotone("run.contour_delta_xl_ueV", &spec.delta_xl)?;
    check_monotone("run.contour_delta_cl_ueV", &spec.delta_cl)?;
    spec.system
        .validate()
        .map_err(|e| SimError::numerical("fixed parameters", e.into()))?;
    let k = kernel(&spec.phonons)?;
    let ncl = spec.delta_cl.len();
    let cells: Vec<usize> = (0..spec.delta_xl.len() * ncl).collect();
    let solved = par_map(&cells, |&c| {
        let sys = SystemParams {
            delta_xl: spec.delta_xl[c / ncl],
            delta_cl: spec.delta_cl[c % ncl],
            ..spec.system
        };
        let r = solve_point(
            &sys,
            &k,
            PhononScattering::Included,
            spec.converge_truncation,
        )
        .map_err(|e| {
            SimError::numerical(
                format!("Δ_xl = {} μeV, Δ_cl = {} μeV", sys.delta_xl, sys.delta_cl),
                e,
            )
        })?;
        Ok((
            ObservableSet::compute(&r.rho, 0.0).exciton_coherence(),
            r.n_fock_used,
            r.residual,
        ))
    })?;
    let coherence: Vec<f64> = solved.iter().map(|s| s.0).collect();
    // first maximum in row-major order
    let best = coherence
        .iter()
        .enumerate()
        .fold(0, |b, (i, &v)| if v > coherence[b] { i } else { b });
    Ok(ContourResult {
        argmax: ContourPeak {
            delta_xl: spec.delta_xl[best / ncl],
            delta_cl: spec.delta_cl[best % ncl],
            value: coherence[best],
        },
        delta_xl: spec.delta_xl.clone(),
        delta_cl: spec.delta_cl.clone(),
        n_fock_used: solved.iter().map(|s| s.1).collect(),
        residual: solved.iter().map(|s| s.2).collect(),
        coherence,
    })
}

/// Single operating point with everything needed for a Fock-state report.
#[derive(Debug, Clone, PartialEq)]
pub struct FockReport {
    pub system: SystemParams,
    pub phonons: PhononEnv,
    pub b_mean: f64,
    pub observables: ObservableSet,
    pub n_fock_used: usize,
    pub residual: f64,
    pub gap: f64,
}

impl FockReport {
    pub fn populations(&self) -> &[f64] {
        &self.observables.fock_populations
    }

    pub fn coherences(&self) -> &DMatrix<C64> {
        &self.observables.fock_coherences
    }

    /// Columns `n, probability`.
    pub fn populations_table(&self) -> Table {
        let mut t = Table::new(["n", "probability"]);
        for (n, &p) in self.populations().iter().enumerate() {
            t.push(vec![n as f64, p]);
        }
        t
    }

    /// Long form (ρ_cav)_{nm}: columns `n, m, re, im, abs`.
    pub fn coherence_table(&self) -> Table {
        let c = self.coherences();
        let mut t = Table::new(["n", "m", "re", "im", "abs"]);
        for n in 0..c.nrows() {
            for m in 0..c.ncols() {
                let z = c[(n, m)];
                t.push(vec![n as f64, m as f64, z.re, z.im, z.norm()]);
            }
        }
        t
    }

    /// One-row summary of the operating point.
    pub fn summary_table(&self) -> Table {
        let o = &self.observables;
        let s = &self.system;
        let mut t = Table::new([
            "T_K",
            "b_mean",
            "omega_r_ueV",
            "g_r_ueV",
            "delta_xl_ueV",
            "delta_cl_ueV",
            "kappa_ueV",
            "theta_rad",
            "variance_normord",
            "exp_adag_a",
            "exp_a_re",
            "exp_a_im",
            "exp_a2_re",
            "exp_a2_im",
            "sigma_minus_re",
            "sigma_minus_im",
            "sigma_minus_abs",
            "n_fock_used",
            "residual",
            "gap",
        ]);
        t.push(vec![
            self.phonons.temperature,
            self.b_mean,
            s.omega_r(self.b_mean),
            s.g_r(self.b_mean),
            s.delta_xl,
            s.delta_cl,
            s.kappa,
            o.theta,
            o.variance_normord,
            o.exp_adag_a,
            o.exp_a.re,
            o.exp_a.im,
            o.exp_a2.re,
            o.exp_a2.im,
            o.exp_sigma_minus.re,
            o.exp_sigma_minus.im,
            o.exciton_coherence(),
            self.n_fock_used as f64,
            self.residual,
            self.gap,
        ]);
        t
    }
}

pub fn run_fock_report(
    system: &SystemParams,
    phonons: &PhononEnv,
    theta: f64,
    converge_truncation: bool,
) -> Result<FockReport> {
    let k = kernel(phonons)?;
    let r = solve_point(system, &k, PhononScattering::Included, converge_truncation)
        .map_err(|e| SimError::numerical("operating point", e))?;
    Ok(FockReport {
        system: *system,
        phonons: *phonons,
        b_mean: k.b_mean(),
        observables: ObservableSet::compute(&r.rho, theta),
        n_fock_used: r.n_fock_used,
        residual: r.residual,
        gap: r.gap,
    })
}
