//! Field moments, normally ordered quadrature variance, exciton coherence and
//! Fock-space statistics of a steady state.

use alloc::vec::Vec;

use crate::operators::{expectation, partial_trace_qd, DensityMatrix, Operators};
use crate::params::SystemParams;
use crate::{DMatrix, C64};

/// ⟨:ΔX_θ²:⟩ = ½[⟨a†a⟩ − |⟨a⟩|² + Re(e^{−2iθ}(⟨a²⟩ − ⟨a⟩²))] for
/// X_θ = ½(a†e^{iθ} + ae^{−iθ}). Negative values mean quadrature squeezing.
pub fn quadrature_variance(rho: &DensityMatrix, theta: f64) -> f64 {
    let m = Moments::of(rho);
    m.variance(theta)
}

/// |⟨σ⁻⟩|
pub fn exciton_coherence(rho: &DensityMatrix) -> f64 {
    let ops = Operators::new(rho.space());
    expectation(&ops.sigma_minus, rho)
        .expect("same space")
        .norm()
}

/// Fock populations P_n and the reduced cavity density matrix.
pub fn fock_statistics(rho: &DensityMatrix) -> (Vec<f64>, DMatrix<C64>) {
    let cav = partial_trace_qd(rho);
    let pops = cav.diagonal().iter().map(|z| z.re).collect();
    (pops, cav)
}

/// Mismatch between ⟨a⟩ and −g_R⟨σ⁻⟩/(Δ_cl − iκ/2), relative to |⟨a⟩|, or the
/// absolute mismatch when |⟨a⟩| < 1e-12.
pub fn cavity_field_relation_check(rho: &DensityMatrix, sys: &SystemParams, b_mean: f64) -> f64 {
    let ops = Operators::new(rho.space());
    let a = expectation(&ops.a, rho).expect("same space");
    let sm = expectation(&ops.sigma_minus, rho).expect("same space");
    let predicted = -sm * sys.g_r(b_mean) / C64::new(sys.delta_cl, -sys.kappa / 2.0);
    let err = (a - predicted).norm();
    if a.norm() < 1e-12 {
        err
    } else {
        err / a.norm()
    }
}

/// First and second cavity moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub a: C64,
    pub adag_a: f64,
    pub a2: C64,
}

impl Moments {
    pub fn of(rho: &DensityMatrix) -> Self {
        let ops = Operators::new(rho.space());
        let a = expectation(&ops.a, rho).expect("same space");
        let adag_a = expectation(&ops.number(), rho).expect("same space").re;
        let a2 = expectation(&ops.a.mul(&ops.a).expect("same space"), rho).expect("same space");
        Self { a, adag_a, a2 }
    }

    /// ⟨a†a⟩ − ⟨a⟩⟨a†⟩
    pub fn incoherent_number(&self) -> f64 {
        self.adag_a - self.a.norm_sqr()
    }

    /// Re(⟨a²⟩ − ⟨a⟩²)
    pub fn anomalous(&self) -> f64 {
        (self.a2 - self.a * self.a).re
    }

    pub fn variance(&self, theta: f64) -> f64 {
        let (s, c) = libm::sincos(-2.0 * theta);
        let phase = C64::new(c, s);
        0.5 * (self.incoherent_number() + (phase * (self.a2 - self.a * self.a)).re)
    }
}

/// Everything reported for one steady state.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSet {
    pub exp_a: C64,
    pub exp_adag_a: f64,
    pub exp_a2: C64,
    pub exp_sigma_minus: C64,
    /// ⟨:ΔX_θ²:⟩ at `theta`.
    pub variance_normord: f64,
    pub theta: f64,
    pub fock_populations: Vec<f64>,
    pub fock_coherences: DMatrix<C64>,
}

impl ObservableSet {
    pub fn compute(rho: &DensityMatrix, theta: f64) -> Self {
        let ops = Operators::new(rho.space());
        let m = Moments::of(rho);
        let sm = expectation(&ops.sigma_minus, rho).expect("same space");
        let (pops, cav) = fock_statistics(rho);
        Self {
            exp_a: m.a,
            exp_adag_a: m.adag_a,
            exp_a2: m.a2,
            exp_sigma_minus: sm,
            variance_normord: m.variance(theta),
            theta,
            fock_populations: pops,
            fock_coherences: cav,
        }
    }

    pub fn exciton_coherence(&self) -> f64 {
        self.exp_sigma_minus.norm()
    }

    /// ⟨a†a⟩ − ⟨a⟩⟨a†⟩
    pub fn incoherent_number(&self) -> f64 {
        self.exp_adag_a - self.exp_a.norm_sqr()
    }

    /// ⟨a⟩⟨a†⟩
    pub fn coherent_number(&self) -> f64 {
        self.exp_a.norm_sqr()
    }

    /// Re(⟨a²⟩ − ⟨a⟩²)
    pub fn anomalous(&self) -> f64 {
        (self.exp_a2 - self.exp_a * self.exp_a).re
    }
}
