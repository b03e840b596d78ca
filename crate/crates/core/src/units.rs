//! Physical constants and the energy ↔ angular-frequency bridge.
//!
//! Internal units: μeV, ps, rad/ps, K.

/// Fixed physical constants in the internal unit system.
#[derive(Debug, Clone, Copy)]
pub struct PhysConstants;

impl PhysConstants {
    /// Reduced Planck constant, μeV·ps.
    pub const HBAR: f64 = 658.211_956_9;
    /// Boltzmann constant, μeV/K.
    pub const K_B: f64 = 86.173_332_62;
}

/// Converts an energy in μeV to an angular frequency in rad/ps.
#[inline]
pub fn energy_to_angular_frequency(energy: f64) -> f64 {
    energy / PhysConstants::HBAR
}

/// Converts an angular frequency in rad/ps to an energy in μeV.
#[inline]
pub fn angular_frequency_to_energy(omega: f64) -> f64 {
    omega * PhysConstants::HBAR
}

/// Thermal energy k_B·T in μeV.
#[inline]
pub fn thermal_energy(temperature: f64) -> f64 {
    PhysConstants::K_B * temperature
}
