//! Closed-world JSON configuration. Every key carries its unit as a suffix;
//! unknown keys are rejected.

use std::path::Path;

use polaron_core::{InputMode, ParamError, PhononEnv, SystemParams};
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::sweep::Axis;

pub const DEFAULT_LINE_POINTS: usize = 121;
pub const DEFAULT_CONTOUR_POINTS: usize = 61;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputModeKey {
    #[default]
    Bare,
    Renormalized,
}

impl From<InputModeKey> for InputMode {
    fn from(k: InputModeKey) -> Self {
        match k {
            InputModeKey::Bare => InputMode::Bare,
            InputModeKey::Renormalized => InputMode::Renormalized,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    #[serde(rename = "omega_ueV")]
    pub omega_uev: f64,
    #[serde(rename = "g_c_ueV")]
    pub g_c_uev: f64,
    #[serde(rename = "delta_xl_ueV")]
    pub delta_xl_uev: f64,
    #[serde(rename = "delta_cl_ueV")]
    pub delta_cl_uev: f64,
    #[serde(rename = "gamma_ueV", default = "default_gamma")]
    pub gamma_uev: f64,
    #[serde(rename = "gamma_prime_ueV", default = "default_gamma_prime")]
    pub gamma_prime_uev: f64,
    #[serde(rename = "kappa_ueV")]
    pub kappa_uev: f64,
    #[serde(default = "default_n_fock")]
    pub n_fock: usize,
    #[serde(default)]
    pub input_mode: InputModeKey,
}

fn default_gamma() -> f64 {
    SystemParams::DEFAULT_GAMMA
}

fn default_gamma_prime() -> f64 {
    SystemParams::DEFAULT_GAMMA_PRIME
}

fn default_n_fock() -> usize {
    SystemParams::DEFAULT_N_FOCK
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhononSection {
    #[serde(rename = "alpha_p_ps2", default = "default_alpha")]
    pub alpha_p_ps2: f64,
    #[serde(rename = "omega_b_ueV", default = "default_omega_b")]
    pub omega_b_uev: f64,
    #[serde(rename = "T_K", default = "default_temperature")]
    pub temperature_k: f64,
    #[serde(default = "default_enabled")]
    pub enabled: bool,
}

fn default_alpha() -> f64 {
    PhononEnv::default().alpha_p
}

fn default_omega_b() -> f64 {
    PhononEnv::default().omega_b
}

fn default_temperature() -> f64 {
    PhononEnv::default().temperature
}

fn default_enabled() -> bool {
    true
}

impl Default for PhononSection {
    fn default() -> Self {
        Self {
            alpha_p_ps2: default_alpha(),
            omega_b_uev: default_omega_b(),
            temperature_k: default_temperature(),
            enabled: true,
        }
    }
}

/// Experiment directives. Which keys matter depends on the subcommand; the
/// rest are ignored by it but still validated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default = "default_points")]
    pub points: usize,
    /// Explicit axis values; overrides start/stop/points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    /// Bath temperatures for rate sweeps.
    #[serde(rename = "temperatures_K", default = "default_rate_temperatures")]
    pub temperatures_k: Vec<f64>,
    /// Δ_xl series in units of Ω_R; replaces `system.delta_xl_ueV` per series.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_xl_over_omega_r: Option<Vec<f64>>,
    /// Operating point Δ_cl in units of √(Ω_R² + Δ_xl²); replaces
    /// `system.delta_cl_ueV` when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_cl_over_scale: Option<f64>,
    #[serde(
        rename = "contour_delta_xl_ueV",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub contour_delta_xl_uev: Option<[f64; 2]>,
    #[serde(
        rename = "contour_delta_cl_ueV",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub contour_delta_cl_uev: Option<[f64; 2]>,
    /// Grid points along (Δ_xl, Δ_cl).
    #[serde(default = "default_contour_points")]
    pub contour_points: [usize; 2],
    #[serde(default)]
    pub theta_rad: f64,
    #[serde(default = "default_enabled")]
    pub converge_truncation: bool,
}

fn default_points() -> usize {
    DEFAULT_LINE_POINTS
}

fn default_rate_temperatures() -> Vec<f64> {
    vec![4.0, 10.0]
}

fn default_contour_points() -> [usize; 2] {
    [DEFAULT_CONTOUR_POINTS; 2]
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            axis: None,
            start: None,
            stop: None,
            points: default_points(),
            values: None,
            temperatures_k: default_rate_temperatures(),
            delta_xl_over_omega_r: None,
            delta_cl_over_scale: None,
            contour_delta_xl_uev: None,
            contour_delta_cl_uev: None,
            contour_points: default_contour_points(),
            theta_rad: 0.0,
            converge_truncation: true,
        }
    }
}

impl RunSection {
    /// Axis values, from `values` or an inclusive linear grid with the given
    /// fallback end points.
    pub fn axis_points(&self, start: f64, stop: f64) -> Vec<f64> {
        if let Some(v) = &self.values {
            return v.clone();
        }
        linspace(
            self.start.unwrap_or(start),
            self.stop.unwrap_or(stop),
            self.points,
        )
    }
}

/// Inclusive grid; a single point sits at `start`.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (points - 1) as f64;
            (0..points)
                .map(|i| {
                    if i + 1 == points {
                        stop
                    } else {
                        start + step * i as f64
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub system: SystemSection,
    #[serde(default)]
    pub phonons: PhononSection,
    #[serde(default)]
    pub run: RunSection,
}

impl Config {
    /// Parses and validates. `origin` names the source in error messages.
    pub fn from_json(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let config: Config = serde_json::from_str(text).map_err(|e| {
            let line = e.line();
            let context = text
                .lines()
                .nth(line.saturating_sub(1))
                .unwrap_or("")
                .trim_end()
                .to_string();
            ConfigError::Parse {
                origin: origin.to_string(),
                line,
                column: e.column(),
                message: e.to_string(),
                context,
            }
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn system_params(&self) -> SystemParams {
        let s = &self.system;
        SystemParams {
            omega: s.omega_uev,
            g_c: s.g_c_uev,
            delta_xl: s.delta_xl_uev,
            delta_cl: s.delta_cl_uev,
            gamma: s.gamma_uev,
            gamma_prime: s.gamma_prime_uev,
            kappa: s.kappa_uev,
            n_fock: s.n_fock,
            input_mode: s.input_mode.into(),
        }
    }

    pub fn phonon_env(&self) -> PhononEnv {
        let p = &self.phonons;
        PhononEnv {
            alpha_p: p.alpha_p_ps2,
            omega_b: p.omega_b_uev,
            temperature: p.temperature_k,
            enabled: p.enabled,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.system_params()
            .validate()
            .map_err(|e| config_field("system", e))?;
        self.phonon_env()
            .validate()
            .map_err(|e| config_field("phonons", e))?;
        let run = &self.run;
        for (key, v) in [
            ("run.start", run.start),
            ("run.stop", run.stop),
            ("run.delta_cl_over_scale", run.delta_cl_over_scale),
        ] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(ConfigError::invalid(key, v, "finite"));
                }
            }
        }
        if !run.theta_rad.is_finite() {
            return Err(ConfigError::invalid(
                "run.theta_rad",
                run.theta_rad,
                "finite",
            ));
        }
        if run.points == 0 {
            return Err(ConfigError::invalid("run.points", 0, ">= 1"));
        }
        if let Some(values) = &run.values {
            check_monotone("run.values", values)?;
        }
        if let Some(series) = &run.delta_xl_over_omega_r {
            if series.is_empty() || series.iter().any(|v| !v.is_finite()) {
                return Err(ConfigError::invalid(
                    "run.delta_xl_over_omega_r",
                    format!("{series:?}"),
                    "non-empty, finite",
                ));
            }
        }
        if run.temperatures_k.is_empty()
            || run
                .temperatures_k
                .iter()
                .any(|t| !(t.is_finite() && *t >= 0.0))
        {
            return Err(ConfigError::invalid(
                "run.temperatures_K",
                format!("{:?}", run.temperatures_k),
                "non-empty, finite and >= 0",
            ));
        }
        for (key, range) in [
            ("run.contour_delta_xl_ueV", run.contour_delta_xl_uev),
            ("run.contour_delta_cl_ueV", run.contour_delta_cl_uev),
        ] {
            if let Some([lo, hi]) = range {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(ConfigError::invalid(
                        key,
                        format!("[{lo}, {hi}]"),
                        "finite with lower < upper",
                    ));
                }
            }
        }
        if run.contour_points.iter().any(|&n| n < 2) {
            return Err(ConfigError::invalid(
                "run.contour_points",
                format!("{:?}", run.contour_points),
                "each >= 2",
            ));
        }
        Ok(())
    }
}

/// Non-empty, finite, strictly increasing or strictly decreasing.
pub fn check_monotone(field: &str, values: &[f64]) -> Result<(), ConfigError> {
    let shown = || format!("{values:?}");
    if values.is_empty() {
        return Err(ConfigError::invalid(field, "[]", "non-empty"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(ConfigError::invalid(field, shown(), "finite"));
    }
    let up = values.windows(2).all(|w| w[0] < w[1]);
    let down = values.windows(2).all(|w| w[0] > w[1]);
    if !(up || down) {
        return Err(ConfigError::invalid(field, shown(), "strictly monotone"));
    }
    Ok(())
}

/// Maps a core field name back to its configuration key.
fn config_field(section: &str, e: ParamError) -> ConfigError {
    let key = match e.field {
        "omega" => "omega_ueV",
        "g_c" => "g_c_ueV",
        "delta_xl" => "delta_xl_ueV",
        "delta_cl" => "delta_cl_ueV",
        "gamma" => "gamma_ueV",
        "gamma_prime" => "gamma_prime_ueV",
        "kappa" => "kappa_ueV",
        "alpha_p" => "alpha_p_ps2",
        "omega_b" => "omega_b_ueV",
        "temperature" => "T_K",
        other => other,
    };
    ConfigError::invalid(format!("{section}.{key}"), e.value, e.requirement)
}
