//! Validated parameter sets for the dot-cavity system and the phonon bath.

use crate::error::ParamError;

/// How `omega` and `g_c` in [`SystemParams`] are to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputMode {
    /// Bare Rabi frequency and cavity coupling.
    #[default]
    Bare,
    /// Phonon-renormalized values Ω_R = ⟨B⟩Ω and g_R = ⟨B⟩g_c; the bare
    /// values are recovered by dividing by ⟨B⟩ at the bath temperature.
    Renormalized,
}

/// Drive, coupling, detuning and decay parameters, all energies in μeV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Rabi frequency (ħΩ).
    pub omega: f64,
    /// Cavity coupling (ħg_c).
    pub g_c: f64,
    /// Exciton-laser detuning ω_x − ω_l.
    pub delta_xl: f64,
    /// Cavity-laser detuning ω_c − ω_l.
    pub delta_cl: f64,
    /// Radiative decay rate of the exciton.
    pub gamma: f64,
    /// Pure dephasing rate of the exciton.
    pub gamma_prime: f64,
    /// Cavity decay rate.
    pub kappa: f64,
    /// Highest photon number kept in the cavity Fock space.
    pub n_fock: usize,
    pub input_mode: InputMode,
}

pub const MIN_FOCK: usize = 2;

impl SystemParams {
    pub const DEFAULT_GAMMA: f64 = 2.0;
    pub const DEFAULT_GAMMA_PRIME: f64 = 0.5;
    pub const DEFAULT_N_FOCK: usize = 5;

    /// Parameters given as phonon-renormalized drive and coupling, with the
    /// default exciton decay rates and truncation.
    pub fn renormalized(omega_r: f64, g_r: f64, delta_xl: f64, delta_cl: f64, kappa: f64) -> Self {
        Self {
            omega: omega_r,
            g_c: g_r,
            delta_xl,
            delta_cl,
            gamma: Self::DEFAULT_GAMMA,
            gamma_prime: Self::DEFAULT_GAMMA_PRIME,
            kappa,
            n_fock: Self::DEFAULT_N_FOCK,
            input_mode: InputMode::Renormalized,
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        let non_negative = [
            ("omega", self.omega),
            ("g_c", self.g_c),
            ("gamma", self.gamma),
            ("gamma_prime", self.gamma_prime),
            ("kappa", self.kappa),
        ];
        for (field, value) in non_negative {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(ParamError {
                    field,
                    value,
                    requirement: "finite and >= 0",
                });
            }
        }
        for (field, value) in [("delta_xl", self.delta_xl), ("delta_cl", self.delta_cl)] {
            if !value.is_finite() {
                return Err(ParamError {
                    field,
                    value,
                    requirement: "finite",
                });
            }
        }
        if self.n_fock < MIN_FOCK {
            return Err(ParamError {
                field: "n_fock",
                value: self.n_fock as f64,
                requirement: "n_fock >= 2",
            });
        }
        Ok(())
    }

    /// Bare Rabi frequency given the mean displacement at the bath temperature.
    pub fn bare_omega(&self, b_mean: f64) -> f64 {
        match self.input_mode {
            InputMode::Bare => self.omega,
            InputMode::Renormalized => self.omega / b_mean,
        }
    }

    /// Bare cavity coupling given the mean displacement.
    pub fn bare_g(&self, b_mean: f64) -> f64 {
        match self.input_mode {
            InputMode::Bare => self.g_c,
            InputMode::Renormalized => self.g_c / b_mean,
        }
    }

    /// Ω_R = ⟨B⟩Ω.
    pub fn omega_r(&self, b_mean: f64) -> f64 {
        match self.input_mode {
            InputMode::Bare => b_mean * self.omega,
            InputMode::Renormalized => self.omega,
        }
    }

    /// g_R = ⟨B⟩g_c.
    pub fn g_r(&self, b_mean: f64) -> f64 {
        match self.input_mode {
            InputMode::Bare => b_mean * self.g_c,
            InputMode::Renormalized => self.g_c,
        }
    }

    /// Laser-exciton detuning ω_l − ω_x.
    pub fn delta_lx(&self) -> f64 {
        -self.delta_xl
    }

    /// Cavity-exciton detuning ω_c − ω_x.
    pub fn delta_cx(&self) -> f64 {
        self.delta_cl - self.delta_xl
    }

    pub fn with_n_fock(mut self, n_fock: usize) -> Self {
        self.n_fock = n_fock;
        self
    }
}

/// Acoustic-phonon bath with spectral function j(ω) = α_p ω³ exp(−ω²/2ω_b²).
///
/// `alpha_p` is the coefficient used directly in j(ω) (ps²). The default 0.06 ps²
/// gives ⟨B⟩ ≈ 0.91 at 4 K with a 1 meV cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhononEnv {
    /// Coupling strength, ps².
    pub alpha_p: f64,
    /// Cutoff energy ħω_b, μeV.
    pub omega_b: f64,
    /// Bath temperature, K.
    pub temperature: f64,
    pub enabled: bool,
}

impl Default for PhononEnv {
    fn default() -> Self {
        Self {
            alpha_p: 0.06,
            omega_b: 1000.0,
            temperature: 4.0,
            enabled: true,
        }
    }
}

impl PhononEnv {
    pub fn at_temperature(temperature: f64) -> Self {
        Self {
            temperature,
            ..Self::default()
        }
    }

    pub fn disabled() -> Self {
        Self {
            enabled: false,
            ..Self::default()
        }
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if !(self.alpha_p >= 0.0 && self.alpha_p.is_finite()) {
            return Err(ParamError {
                field: "alpha_p",
                value: self.alpha_p,
                requirement: "finite and >= 0",
            });
        }
        if !(self.omega_b > 0.0 && self.omega_b.is_finite()) {
            return Err(ParamError {
                field: "omega_b",
                value: self.omega_b,
                requirement: "finite and > 0",
            });
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(ParamError {
                field: "temperature",
                value: self.temperature,
                requirement: "finite and >= 0",
            });
        }
        Ok(())
    }
}
