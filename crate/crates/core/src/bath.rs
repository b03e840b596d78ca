//! Phonon-bath quantities: spectral function, mean displacement ⟨B⟩, phonon
//! phase φ(τ) and the four phonon-induced scattering rates.
//!
//! The ω-integrals use Gauss–Legendre on `[0, 8ω_b]`. The τ-integrals use the
//! trapezoid rule on a uniform grid over `[0, τ_max]`, where τ_max is grown from
//! 12 ps until `|φ(τ_max)| ≤ 1e-8`. At T = 0 the phase only decays as −α/τ², so
//! beyond `ω_b τ ≥ 15` it is evaluated from its asymptotic series and the
//! remaining τ-tail of each rate integral is added in closed form.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::{PhononEnv, SystemParams};
use crate::quadrature::GaussLegendre;
use crate::special::oscillatory_inverse_square_tail;
use crate::units::{energy_to_angular_frequency, PhysConstants};
use crate::C64;

/// Upper limit of the ω-integrals in units of ω_b.
pub const OMEGA_RANGE: f64 = 8.0;
pub const OMEGA_NODES: usize = 2000;
/// Base τ step, ps.
pub const TAU_STEP: f64 = 0.01;
/// Smallest τ_max, ps.
pub const TAU_MAX_MIN: f64 = 12.0;
/// Required decay of |φ| at τ_max.
pub const PHASE_TAIL_TOL: f64 = 1e-8;
/// Largest τ_max for T > 0 before the Gauss–Legendre grid stops resolving cos(ωτ).
pub const TAU_MAX_THERMAL_CAP: f64 = 384.0;
/// Node-doubling tolerance for ω-integrals.
pub const CONVERGENCE_TOL: f64 = 1e-8;
/// Negative rates with magnitude below this (μeV) are quadrature noise and clamped to zero.
pub const RATE_NOISE_FLOOR: f64 = 1e-6;
/// ω_b·τ beyond which the zero-temperature phase uses its asymptotic series.
const ZERO_T_SERIES_START: f64 = 15.0;

/// j(ω) = α_p ω³ exp(−ω²/2ω_b²), with ω in rad/ps.
pub fn spectral_function(omega: f64, env: &PhononEnv) -> f64 {
    let wb = energy_to_angular_frequency(env.omega_b);
    env.alpha_p * omega * omega * omega * libm::exp(-omega * omega / (2.0 * wb * wb))
}

/// Quadrature resolution of the bath integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolution {
    pub omega_nodes: usize,
    pub tau_step: f64,
}

impl Default for Resolution {
    fn default() -> Self {
        Self {
            omega_nodes: OMEGA_NODES,
            tau_step: TAU_STEP,
        }
    }
}

impl Resolution {
    /// Twice the ω nodes and half the τ step.
    pub fn refined(self) -> Self {
        Self {
            omega_nodes: 2 * self.omega_nodes,
            tau_step: self.tau_step / 2.0,
        }
    }
}

/// Gauss–Legendre rules on `[0, 1]` at the working and doubled node counts,
/// reusable across bath environments.
#[derive(Debug, Clone)]
pub struct QuadratureRules {
    pub resolution: Resolution,
    unit: GaussLegendre,
    check: GaussLegendre,
}

impl QuadratureRules {
    pub fn new(resolution: Resolution) -> Self {
        Self {
            resolution,
            unit: GaussLegendre::new(resolution.omega_nodes, 0.0, 1.0),
            check: GaussLegendre::new(2 * resolution.omega_nodes, 0.0, 1.0),
        }
    }
}

impl Default for QuadratureRules {
    fn default() -> Self {
        Self::new(Resolution::default())
    }
}

/// ω-grid with the weights of φ folded in: φ(τ) = Σ w_j [c_j cos(ω_j τ) − i sin(ω_j τ)]
/// where w_j carries j(ω)/ω² and c_j = coth(ħω_j/2k_BT).
#[derive(Debug, Clone)]
struct PhaseGrid {
    omega: Vec<f64>,
    weight: Vec<f64>,
    coth: Vec<f64>,
}

impl PhaseGrid {
    fn new(rule: &GaussLegendre, env: &PhononEnv) -> Self {
        let wb = energy_to_angular_frequency(env.omega_b);
        let span = OMEGA_RANGE * wb;
        let n = rule.len();
        let mut omega = Vec::with_capacity(n);
        let mut weight = Vec::with_capacity(n);
        let mut coth = Vec::with_capacity(n);
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let om = span * x;
            omega.push(om);
            // j(ω)/ω² = α ω e^{−ω²/2ω_b²}
            weight.push(span * w * env.alpha_p * om * libm::exp(-om * om / (2.0 * wb * wb)));
            coth.push(thermal_coth(om, env.temperature));
        }
        Self {
            omega,
            weight,
            coth,
        }
    }

    /// ∫ j(ω)/ω² coth(ħω/2k_BT) dω = φ(0).
    fn phase_at_zero(&self) -> f64 {
        // Folding ω into coth keeps the ω → 0 limit (2k_BT/ħ) finite; nodes are
        // strictly positive so the direct product is safe.
        self.weight.iter().zip(&self.coth).map(|(w, c)| w * c).sum()
    }

    fn phase(&self, tau: f64) -> C64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for ((&om, &w), &c) in self.omega.iter().zip(&self.weight).zip(&self.coth) {
            let (s, co) = libm::sincos(om * tau);
            re += w * c * co;
            im -= w * s;
        }
        C64::new(re, im)
    }

    /// φ on `τ_k = k·step`, `k = 0..count`, by rotating e^{−iω_j τ} step by step.
    fn phase_table(&self, step: f64, count: usize) -> Vec<C64> {
        const RESYNC: usize = 256;
        let mut re = alloc::vec![0.0; count];
        let mut im = alloc::vec![0.0; count];
        for ((&om, &w), &c) in self.omega.iter().zip(&self.weight).zip(&self.coth) {
            let (sd, cd) = libm::sincos(om * step);
            let (mut s, mut co) = (0.0, 1.0);
            for k in 0..count {
                if k % RESYNC == 0 {
                    let (s0, c0) = libm::sincos(om * step * k as f64);
                    s = s0;
                    co = c0;
                }
                re[k] += w * c * co;
                im[k] -= w * s;
                let next_c = co * cd - s * sd;
                s = s * cd + co * sd;
                co = next_c;
            }
        }
        re.into_iter()
            .zip(im)
            .map(|(r, i)| C64::new(r, i))
            .collect()
    }
}

/// coth(ħω/2k_BT), with the T = 0 limit 1.
fn thermal_coth(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 1.0;
    }
    let x = PhysConstants::HBAR * omega / (2.0 * PhysConstants::K_B * temperature);
    if x < 1e-4 {
        // x·coth x = 1 + x²/3 + O(x⁴)
        (1.0 + x * x / 3.0) / x
    } else if x > 40.0 {
        1.0
    } else {
        1.0 / libm::tanh(x)
    }
}

/// Real part of φ(τ) at T = 0 for ω_b τ ≫ 1:
/// −α ω_b² Σ_{k≥1} (2k−1)!! / (ω_b τ)^{2k}. The imaginary part is O(e^{−(ω_b τ)²/2}).
fn zero_temperature_phase_series(tau: f64, alpha: f64, wb: f64) -> C64 {
    let s2 = (wb * tau) * (wb * tau);
    let mut term = 1.0;
    let mut sum = 0.0;
    let mut k = 1.0;
    loop {
        let next = term * (2.0 * k - 1.0) / s2;
        if next > term || next < 1e-18 * sum {
            break;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
    let s = wb * tau;
    let imag = -alpha * wb * wb * libm::sqrt(PI / 2.0) * s * libm::exp(-s * s / 2.0);
    C64::new(-alpha * wb * wb * sum, imag)
}

/// ⟨B⟩ = exp(−½ φ(0)); 1 when phonons are disabled.
pub fn mean_displacement(env: &PhononEnv) -> Result<f64> {
    mean_displacement_with(env, &QuadratureRules::default())
}

pub fn mean_displacement_with(env: &PhononEnv, rules: &QuadratureRules) -> Result<f64> {
    env.validate()?;
    if !env.enabled {
        return Ok(1.0);
    }
    let coarse = PhaseGrid::new(&rules.unit, env).phase_at_zero();
    let fine = PhaseGrid::new(&rules.check, env).phase_at_zero();
    let (b, b_fine) = (libm::exp(-0.5 * coarse), libm::exp(-0.5 * fine));
    let change = (b - b_fine).abs();
    if change > CONVERGENCE_TOL {
        return Err(Error::QuadratureNotConverged {
            what: "mean displacement",
            change,
        });
    }
    Ok(b)
}

/// φ(τ) for τ ≥ 0, evaluated directly (no table).
pub fn phonon_phase(tau: f64, env: &PhononEnv) -> Result<C64> {
    env.validate()?;
    if !env.enabled {
        return Ok(C64::new(0.0, 0.0));
    }
    let rules = QuadratureRules::default();
    let coarse = PhaseGrid::new(&rules.unit, env);
    let fine = PhaseGrid::new(&rules.check, env);
    phase_checked(&coarse, &fine, env, tau)
}

fn phase_direct(grid: &PhaseGrid, env: &PhononEnv, tau: f64) -> C64 {
    let wb = energy_to_angular_frequency(env.omega_b);
    if env.temperature == 0.0 && wb * tau >= ZERO_T_SERIES_START {
        zero_temperature_phase_series(tau, env.alpha_p, wb)
    } else {
        grid.phase(tau)
    }
}

fn phase_checked(coarse: &PhaseGrid, fine: &PhaseGrid, env: &PhononEnv, tau: f64) -> Result<C64> {
    let a = phase_direct(coarse, env, tau);
    let b = phase_direct(fine, env, tau);
    let change = (a - b).norm();
    if change > CONVERGENCE_TOL {
        return Err(Error::QuadratureNotConverged {
            what: "phonon phase",
            change,
        });
    }
    Ok(a)
}

/// The four phonon-induced rates (μeV) and the detunings they were evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhononRates {
    /// Γ^{σ⁺}: phonon-assisted exciton excitation.
    pub gamma_sigma_plus: f64,
    /// Γ^{σ⁻}: phonon-assisted exciton de-excitation.
    pub gamma_sigma_minus: f64,
    /// Γ^{a†σ⁻}: photon creation with exciton decay.
    pub gamma_adag_sigma_minus: f64,
    /// Γ^{σ⁺a}: photon annihilation with exciton excitation.
    pub gamma_sigma_plus_a: f64,
    /// ω_l − ω_x, μeV.
    pub delta_lx: f64,
    /// ω_c − ω_x, μeV.
    pub delta_cx: f64,
}

impl PhononRates {
    pub fn zero(sys: &SystemParams) -> Self {
        Self {
            gamma_sigma_plus: 0.0,
            gamma_sigma_minus: 0.0,
            gamma_adag_sigma_minus: 0.0,
            gamma_sigma_plus_a: 0.0,
            delta_lx: sys.delta_lx(),
            delta_cx: sys.delta_cx(),
        }
    }
}

/// Precomputed bath state for one [`PhononEnv`]: ⟨B⟩ and the tabulated
/// correlation kernel e^{φ(τ)} − 1 shared by every rate evaluation.
#[derive(Debug, Clone)]
pub struct BathKernel {
    env: PhononEnv,
    b_mean: f64,
    tau_step: f64,
    tau_max: f64,
    phase: Vec<C64>,
    correlation: Vec<C64>,
    grid: Option<PhaseGrid>,
    zero_t_tail: bool,
}

impl BathKernel {
    pub fn new(env: &PhononEnv) -> Result<Self> {
        Self::with_rules(env, &QuadratureRules::default())
    }

    pub fn with_rules(env: &PhononEnv, rules: &QuadratureRules) -> Result<Self> {
        env.validate()?;
        if !env.enabled {
            return Ok(Self {
                env: *env,
                b_mean: 1.0,
                tau_step: rules.resolution.tau_step,
                tau_max: 0.0,
                phase: Vec::new(),
                correlation: Vec::new(),
                grid: None,
                zero_t_tail: false,
            });
        }
        let b_mean = mean_displacement_with(env, rules)?;
        let coarse = PhaseGrid::new(&rules.unit, env);
        let fine = PhaseGrid::new(&rules.check, env);
        let zero_t = env.temperature == 0.0;

        let step = rules.resolution.tau_step;
        let mut tau_max = TAU_MAX_MIN;
        loop {
            let residual = phase_checked(&coarse, &fine, env, tau_max)?.norm();
            if residual <= PHASE_TAIL_TOL {
                break;
            }
            if !zero_t && tau_max >= TAU_MAX_THERMAL_CAP {
                return Err(Error::CorrelationTail {
                    what: "phonon phase",
                    residual,
                });
            }
            tau_max *= 2.0;
        }
        // Spot-check the ω rule across the window.
        for frac in [0.125, 0.25, 0.5] {
            phase_checked(&coarse, &fine, env, frac * tau_max)?;
        }

        let count = libm::round(tau_max / step) as usize + 1;
        let phase = if zero_t {
            let wb = energy_to_angular_frequency(env.omega_b);
            let split = ((ZERO_T_SERIES_START / wb / step).ceil() as usize).min(count);
            let mut table = coarse.phase_table(step, split);
            table.extend(
                (split..count)
                    .map(|k| zero_temperature_phase_series(k as f64 * step, env.alpha_p, wb)),
            );
            table
        } else {
            coarse.phase_table(step, count)
        };
        let correlation = phase.iter().map(|p| p.exp() - C64::new(1.0, 0.0)).collect();
        Ok(Self {
            env: *env,
            b_mean,
            tau_step: step,
            tau_max: (count - 1) as f64 * step,
            phase,
            correlation,
            grid: Some(coarse),
            zero_t_tail: zero_t,
        })
    }

    pub fn env(&self) -> &PhononEnv {
        &self.env
    }

    pub fn b_mean(&self) -> f64 {
        self.b_mean
    }

    pub fn tau_step(&self) -> f64 {
        self.tau_step
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    /// φ(τ_k) on the kernel grid `τ_k = k·tau_step`.
    pub fn phase_table(&self) -> &[C64] {
        &self.phase
    }

    /// φ(τ) by direct quadrature.
    pub fn phase_at(&self, tau: f64) -> C64 {
        match &self.grid {
            Some(grid) => phase_direct(grid, &self.env, tau),
            None => C64::new(0.0, 0.0),
        }
    }

    /// Re ∫₀^∞ e^{iΔτ/ħ} (e^{φ(τ)} − 1) dτ in ps, Δ in μeV.
    pub fn correlation_integral(&self, detuning: f64) -> f64 {
        if self.grid.is_none() {
            return 0.0;
        }
        let w = energy_to_angular_frequency(detuning);
        let required = if w == 0.0 {
            self.tau_step
        } else {
            self.tau_step.min(PI / (10.0 * w.abs()))
        };
        let sub = libm::ceil(self.tau_step / required - 1e-12).max(1.0) as usize;

        let body = if sub == 1 {
            oscillating_trapezoid(&self.correlation, self.tau_step, w)
        } else {
            // Detuning too large for the tabulated grid: refine directly.
            let step = self.tau_step / sub as f64;
            let count = (self.correlation.len() - 1) * sub + 1;
            let samples: Vec<C64> = (0..count)
                .map(|k| self.phase_at(k as f64 * step).exp() - C64::new(1.0, 0.0))
                .collect();
            oscillating_trapezoid(&samples, step, w)
        };
        let tail = if self.zero_t_tail {
            // e^φ − 1 ≈ φ ≈ −α/τ² beyond τ_max
            -self.env.alpha_p * oscillatory_inverse_square_tail(w, self.tau_max).re
        } else {
            0.0
        };
        body + tail
    }

    /// Rates with Ω_R and g_R taken at this kernel's ⟨B⟩.
    pub fn rates(&self, sys: &SystemParams) -> Result<PhononRates> {
        self.rates_with_b(sys, self.b_mean)
    }

    /// Rates with Ω_R = ⟨B⟩Ω and g_R = ⟨B⟩g_c at the given `b_mean`.
    pub fn rates_with_b(&self, sys: &SystemParams, b_mean: f64) -> Result<PhononRates> {
        sys.validate()?;
        if self.grid.is_none() {
            return Ok(PhononRates::zero(sys));
        }
        let hbar = PhysConstants::HBAR;
        let omega_r = sys.omega_r(b_mean);
        let g_r = sys.g_r(b_mean);
        let drive = omega_r * omega_r / (2.0 * hbar);
        let cavity = 2.0 * g_r * g_r / hbar;
        let (dlx, dcx) = (sys.delta_lx(), sys.delta_cx());

        Ok(PhononRates {
            gamma_sigma_plus: clamp_rate("sigma_plus", drive * self.correlation_integral(dlx))?,
            gamma_sigma_minus: clamp_rate("sigma_minus", drive * self.correlation_integral(-dlx))?,
            gamma_adag_sigma_minus: clamp_rate(
                "adag_sigma_minus",
                cavity * self.correlation_integral(-dcx),
            )?,
            gamma_sigma_plus_a: clamp_rate(
                "sigma_plus_a",
                cavity * self.correlation_integral(dcx),
            )?,
            delta_lx: dlx,
            delta_cx: dcx,
        })
    }
}

fn oscillating_trapezoid(samples: &[C64], step: f64, w: f64) -> f64 {
    let n = samples.len();
    if n < 2 {
        return 0.0;
    }
    let mut acc = 0.0;
    for (k, s) in samples.iter().enumerate() {
        let (sn, cs) = libm::sincos(w * step * k as f64);
        // Re[(cos + i sin)(s.re + i s.im)]
        let v = cs * s.re - sn * s.im;
        acc += if k == 0 || k == n - 1 { 0.5 * v } else { v };
    }
    acc * step
}

fn clamp_rate(channel: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -RATE_NOISE_FLOOR {
        Ok(0.0)
    } else {
        Err(Error::NegativeRate { channel, value })
    }
}

/// Rates from scratch: builds a kernel for `env` and evaluates with the given ⟨B⟩.
pub fn compute_rates(sys: &SystemParams, env: &PhononEnv, b_mean: f64) -> Result<PhononRates> {
    if !env.enabled {
        return Ok(PhononRates::zero(sys));
    }
    BathKernel::new(env)?.rates_with_b(sys, b_mean)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_function_values() {
        let env = PhononEnv::default();
        assert_eq!(spectral_function(0.0, &env), 0.0);
        let wb = 1000.0 / 658.2119569;
        let v = spectral_function(wb, &env);
        assert!((v - 0.06 * wb * wb * wb * libm::exp(-0.5)).abs() < 1e-15);
        assert!((v - 0.12763).abs() < 5e-5);
    }

    #[test]
    fn spectral_function_peaks_at_sqrt3_cutoff() {
        let env = PhononEnv::default();
        let wb = 1000.0 / 658.2119569;
        let peak = libm::sqrt(3.0) * wb;
        assert!((peak - 2.6315).abs() < 1e-4);
        // brute-force scan
        let (mut best, mut arg) = (0.0, 0.0);
        for k in 0..200_000 {
            let w = k as f64 * 5e-5;
            let v = spectral_function(w, &env);
            if v > best {
                best = v;
                arg = w;
            }
        }
        assert!((arg - peak).abs() < 1e-4);
    }

    #[test]
    fn thermal_coth_limits() {
        assert_eq!(thermal_coth(1.0, 0.0), 1.0);
        let kt = PhysConstants::K_B * 4.0;
        let small = 1e-9;
        // ω coth(ħω/2kT) → 2kT/ħ
        let lim = small * thermal_coth(small, 4.0);
        assert!((lim - 2.0 * kt / PhysConstants::HBAR).abs() < 1e-12);
    }

    #[test]
    fn disabled_bath_is_trivial() {
        let env = PhononEnv::disabled();
        assert_eq!(mean_displacement(&env).unwrap(), 1.0);
        let k = BathKernel::new(&env).unwrap();
        assert_eq!(k.b_mean(), 1.0);
        let sys = SystemParams::renormalized(50.0, 75.0, -75.0, -27.0, 45.0);
        let r = k.rates(&sys).unwrap();
        assert_eq!(r, PhononRates::zero(&sys));
    }

    #[test]
    fn zero_temperature_series_matches_quadrature() {
        let env = PhononEnv::at_temperature(0.0);
        let wb = energy_to_angular_frequency(env.omega_b);
        let rule = GaussLegendre::new(4000, 0.0, 1.0);
        let grid = PhaseGrid::new(&rule, &env);
        for tau in [12.0, 20.0, 30.0] {
            let q = grid.phase(tau);
            let s = zero_temperature_phase_series(tau, env.alpha_p, wb);
            assert!((q - s).norm() < 1e-12, "τ={tau}: {q} vs {s}");
        }
    }

    #[test]
    fn tail_growth_at_low_temperature() {
        let warm = BathKernel::new(&PhononEnv::at_temperature(4.0)).unwrap();
        assert_eq!(warm.tau_max(), 12.0);
        let cold = BathKernel::new(&PhononEnv::at_temperature(0.5)).unwrap();
        assert!(cold.tau_max() > 12.0);
        assert!(cold.phase_at(cold.tau_max()).norm() <= PHASE_TAIL_TOL);
        let zero = BathKernel::new(&PhononEnv::at_temperature(0.0)).unwrap();
        assert!(zero.phase_table().last().unwrap().norm() <= PHASE_TAIL_TOL);
    }

    #[test]
    fn negative_noise_is_clamped() {
        assert_eq!(clamp_rate("x", -5e-7).unwrap(), 0.0);
        assert_eq!(clamp_rate("x", 0.3).unwrap(), 0.3);
        assert!(matches!(
            clamp_rate("x", -1e-3),
            Err(Error::NegativeRate { .. })
        ));
    }
}
