use polaron_core::bath::{
    compute_rates, mean_displacement, phonon_phase, QuadratureRules, Resolution,
};
use polaron_core::units::PhysConstants;
use polaron_core::{BathKernel, PhononEnv, SystemParams, C64};

const HBAR: f64 = PhysConstants::HBAR;
const K_B: f64 = PhysConstants::K_B;

/// Phase φ(τ) and correlation integrals evaluated from scratch with Simpson
/// rules in ω and τ, sharing no code with the library.
struct Oracle {
    tau_step: f64,
    correlation: Vec<C64>,
}

impl Oracle {
    fn new(env: &PhononEnv, tau_max: f64, tau_step: f64) -> Self {
        let wb = env.omega_b / HBAR;
        let omega_panels = 6000;
        let h = 8.0 * wb / omega_panels as f64;
        // weights j(ω)/ω² · Simpson weight, with coth folded into the cosine part
        // ω = 0 node: j(ω)/ω²·coth → 2α k_B T/ħ, the sine part vanishes
        let origin = if env.temperature == 0.0 {
            0.0
        } else {
            2.0 * env.alpha_p * K_B * env.temperature / HBAR
        };
        let mut nodes = vec![(0.0, h / 3.0 * origin, 1.0)];
        for k in 1..=omega_panels {
            let w = k as f64 * h;
            let sw = if k == omega_panels {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let weight = sw * h / 3.0 * env.alpha_p * w * (-w * w / (2.0 * wb * wb)).exp();
            let coth = if env.temperature == 0.0 {
                1.0
            } else {
                1.0 / (HBAR * w / (2.0 * K_B * env.temperature)).tanh()
            };
            nodes.push((w, weight, coth));
        }
        let count = (tau_max / tau_step).round() as usize + 1;
        let correlation = (0..count)
            .map(|i| {
                let tau = i as f64 * tau_step;
                let (mut re, mut im) = (0.0, 0.0);
                for &(w, weight, coth) in &nodes {
                    re += weight * coth * (w * tau).cos();
                    im -= weight * (w * tau).sin();
                }
                C64::new(re, im).exp() - C64::new(1.0, 0.0)
            })
            .collect();
        Self {
            tau_step,
            correlation,
        }
    }

    /// Re ∫ e^{iΔτ/ħ}(e^φ − 1) dτ by Simpson on the stored grid.
    fn integral(&self, detuning: f64) -> f64 {
        let w = detuning / HBAR;
        let n = self.correlation.len() - 1;
        let h = self.tau_step;
        let mut acc = 0.0;
        for (k, c) in self.correlation.iter().enumerate() {
            let sw = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += sw * (C64::from_polar(1.0, w * k as f64 * h) * c).re;
        }
        acc * h / 3.0
    }
}

#[test]
fn detailed_balance_against_independent_oracle() {
    let env = PhononEnv::at_temperature(4.0);
    let kernel = BathKernel::new(&env).unwrap();
    let oracle = Oracle::new(&env, 24.0, 0.005);
    let kt = K_B * env.temperature;
    for &d in &[-600.0, -300.0, -120.0, -50.0, 25.0, 75.0, 200.0, 450.0] {
        let plus = oracle.integral(d);
        let minus = oracle.integral(-d);
        let ratio = plus / minus;
        let expected = (d / kt).exp();
        assert!(
            (ratio / expected - 1.0).abs() < 0.02,
            "oracle KMS at Δ = {d}: {ratio} vs {expected}"
        );

        let lib = kernel.correlation_integral(d);
        assert!(
            (lib - plus).abs() <= 1e-6 * plus.abs().max(1.0),
            "Δ = {d}: library {lib} vs oracle {plus}"
        );
    }
}

#[test]
fn detailed_balance_of_library_rates() {
    for t in [2.0, 4.0, 10.0] {
        let env = PhononEnv::at_temperature(t);
        let kernel = BathKernel::new(&env).unwrap();
        for dxl in [-500.0, -150.0, -75.0, -20.0, 30.0, 100.0, 300.0] {
            let sys = SystemParams::renormalized(50.0, 75.0, dxl, -27.0, 45.0);
            let r = kernel.rates(&sys).unwrap();
            let ratio = r.gamma_sigma_plus / r.gamma_sigma_minus;
            let expected = (r.delta_lx / (K_B * t)).exp();
            assert!(
                (ratio / expected - 1.0).abs() < 0.02,
                "T = {t}, Δ_xl = {dxl}: {ratio} vs {expected}"
            );
        }
    }
}

#[test]
fn zero_temperature_displacement_closed_form() {
    let env = PhononEnv::at_temperature(0.0);
    let wb = env.omega_b / HBAR;
    let exact = (-env.alpha_p * wb * wb / 2.0).exp();
    let b = mean_displacement(&env).unwrap();
    assert!((b / exact - 1.0).abs() <= 1e-6);
}

#[test]
fn displacement_at_four_kelvin() {
    let b = mean_displacement(&PhononEnv::at_temperature(4.0)).unwrap();
    assert!((b - 0.91).abs() <= 0.005, "{b}");
}

#[test]
fn displacement_decreases_with_temperature() {
    let mut last = f64::INFINITY;
    for i in 0..=20 {
        let b = mean_displacement(&PhononEnv::at_temperature(i as f64)).unwrap();
        assert!(b > 0.0 && b <= 1.0);
        assert!(b < last, "⟨B⟩ not decreasing at {i} K");
        last = b;
    }
    assert_eq!(mean_displacement(&PhononEnv::disabled()).unwrap(), 1.0);
}

#[test]
fn phase_at_origin_matches_displacement() {
    for t in [0.0, 1.0, 4.0, 15.0] {
        let env = PhononEnv::at_temperature(t);
        let phi = phonon_phase(0.0, &env).unwrap();
        let b = mean_displacement(&env).unwrap();
        assert_eq!(phi.im, 0.0);
        assert!((phi.re + 2.0 * b.ln()).abs() <= 1e-10, "T = {t}");
    }
}

#[test]
fn phase_decays_by_twelve_picoseconds() {
    let phi = phonon_phase(12.0, &PhononEnv::default()).unwrap();
    assert!(phi.norm() <= 1e-8, "{phi}");
    let zero_t = phonon_phase(1.3, &PhononEnv::at_temperature(0.0)).unwrap();
    assert!(zero_t.re != 0.0 && zero_t.im != 0.0);
}

#[test]
fn rates_vanish_with_coupling() {
    let sys = SystemParams::renormalized(50.0, 75.0, -75.0, -27.04, 45.0);
    let base = PhononEnv::default();
    let strong = BathKernel::new(&base).unwrap().rates(&sys).unwrap();
    let weak_env = PhononEnv {
        alpha_p: 1e-4,
        ..base
    };
    let weak = BathKernel::new(&weak_env).unwrap().rates(&sys).unwrap();
    let scale = 1e-4 / base.alpha_p;
    for (w, s) in [
        (weak.gamma_sigma_plus, strong.gamma_sigma_plus),
        (weak.gamma_sigma_minus, strong.gamma_sigma_minus),
        (weak.gamma_adag_sigma_minus, strong.gamma_adag_sigma_minus),
        (weak.gamma_sigma_plus_a, strong.gamma_sigma_plus_a),
    ] {
        assert!(w >= 0.0);
        // leading order is linear in α
        assert!(w <= 2.0 * scale * s + 1e-9, "{w} vs {s}");
    }
    let off = compute_rates(&sys, &PhononEnv::disabled(), 1.0).unwrap();
    assert_eq!(
        off.gamma_sigma_plus
            + off.gamma_sigma_minus
            + off.gamma_adag_sigma_minus
            + off.gamma_sigma_plus_a,
        0.0
    );
}

#[test]
fn grid_doubling_moves_rates_below_tolerance() {
    let env = PhononEnv::default();
    let sys = SystemParams::renormalized(50.0, 75.0, -75.0, -27.04, 45.0);
    let coarse = BathKernel::new(&env).unwrap().rates(&sys).unwrap();
    let fine_rules = QuadratureRules::new(Resolution::default().refined());
    let fine = BathKernel::with_rules(&env, &fine_rules)
        .unwrap()
        .rates(&sys)
        .unwrap();
    for (a, b) in [
        (coarse.gamma_sigma_plus, fine.gamma_sigma_plus),
        (coarse.gamma_sigma_minus, fine.gamma_sigma_minus),
        (coarse.gamma_adag_sigma_minus, fine.gamma_adag_sigma_minus),
        (coarse.gamma_sigma_plus_a, fine.gamma_sigma_plus_a),
    ] {
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn sign_flip_swaps_drive_rates() {
    let kernel = BathKernel::new(&PhononEnv::default()).unwrap();
    for d in [-200.0, -75.0, 40.0, 130.0] {
        let a = kernel
            .rates(&SystemParams::renormalized(50.0, 75.0, d, -27.0, 45.0))
            .unwrap();
        let b = kernel
            .rates(&SystemParams::renormalized(50.0, 75.0, -d, -27.0, 45.0))
            .unwrap();
        assert_eq!(a.gamma_sigma_plus, b.gamma_sigma_minus);
        assert_eq!(a.gamma_sigma_minus, b.gamma_sigma_plus);
    }
    let zero = kernel
        .rates(&SystemParams::renormalized(50.0, 75.0, 0.0, -27.0, 45.0))
        .unwrap();
    assert_eq!(zero.gamma_sigma_plus, zero.gamma_sigma_minus);
}

#[test]
fn rates_grow_with_temperature() {
    let cold = BathKernel::new(&PhononEnv::at_temperature(4.0)).unwrap();
    let warm = BathKernel::new(&PhononEnv::at_temperature(10.0)).unwrap();
    for i in 0..=40 {
        let dxl = -2000.0 + 100.0 * i as f64;
        let sys = SystemParams::renormalized(50.0, 75.0, dxl, -27.0, 45.0);
        let c = cold.rates(&sys).unwrap();
        let w = warm.rates(&sys).unwrap();
        assert!(w.gamma_sigma_plus >= c.gamma_sigma_plus, "Δ_xl = {dxl}");
        assert!(w.gamma_sigma_minus >= c.gamma_sigma_minus, "Δ_xl = {dxl}");
    }
}

#[test]
fn zero_temperature_rates_are_non_negative() {
    let kernel = BathKernel::new(&PhononEnv::at_temperature(0.0)).unwrap();
    for i in 0..=30 {
        let dxl = -1500.0 + 100.0 * i as f64;
        let r = kernel
            .rates(&SystemParams::renormalized(50.0, 75.0, dxl, -27.0, 45.0))
            .unwrap();
        assert!(r.gamma_sigma_plus >= 0.0 && r.gamma_sigma_minus >= 0.0);
        assert!(r.gamma_adag_sigma_minus >= 0.0 && r.gamma_sigma_plus_a >= 0.0);
    }
}
