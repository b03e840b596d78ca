mod common;

use common::{max_abs, operating_point, random_complex, random_hermitian, rng};
use polaron_core::liouvillian::{assemble, hermiticity_defect, Channel};
use polaron_core::solver::evolve;
use polaron_core::units::PhysConstants;
use polaron_core::{
    DMatrix, DensityMatrix, HilbertSpace, Liouvillian, PhononEnv, QOperator, SystemParams, C64,
};

/// −(i/ħ)[H, ρ] + Σ (Γ/2ħ)(2OρO† − O†Oρ − ρO†O), evaluated with plain
/// matrix products.
fn direct(l: &Liouvillian, rho: &DMatrix<C64>) -> DMatrix<C64> {
    let h = l.hamiltonian().matrix();
    let i = C64::new(0.0, 1.0);
    let mut out = (h * rho - rho * h) * (-i);
    for ch in l.channels() {
        let o = ch.collapse.matrix();
        let od = o.adjoint();
        let odo = &od * o;
        let term = (o * rho * &od) * C64::new(2.0, 0.0) - &odo * rho - rho * &odo;
        out += term * C64::new(ch.rate / 2.0, 0.0);
    }
    out / C64::new(PhysConstants::HBAR, 0.0)
}

#[test]
fn vectorization_matches_direct_evaluation() {
    let mut r = rng(11);
    let l = assemble(&operating_point(), &PhononEnv::default()).unwrap();
    assert_eq!(l.channels().len(), 7);
    let d = l.space().dim();
    for _ in 0..50 {
        let rho = random_hermitian(&mut r, d);
        let err = max_abs(&(l.apply(&rho) - direct(&l, &rho)));
        assert!(err <= 1e-12, "{err}");
    }
}

#[test]
fn vectorization_with_random_generator() {
    let mut r = rng(12);
    let space = HilbertSpace::new(3);
    let d = space.dim();
    for _ in 0..10 {
        let h = QOperator::from_matrix(space, random_hermitian(&mut r, d) * C64::new(100.0, 0.0))
            .unwrap();
        let channels = (0..3)
            .map(|k| Channel {
                name: "random",
                rate: 10.0 * (k + 1) as f64,
                collapse: QOperator::from_matrix(space, random_complex(&mut r, d)).unwrap(),
            })
            .collect();
        let l = Liouvillian::from_parts(h, channels).unwrap();
        let rho = random_complex(&mut r, d);
        assert!(max_abs(&(l.apply(&rho) - direct(&l, &rho))) <= 1e-12);
        assert!(l.trace_defect() <= 1e-12);
    }
}

#[test]
fn hermitian_in_hermitian_out() {
    let mut r = rng(13);
    let l = assemble(&operating_point(), &PhononEnv::at_temperature(10.0)).unwrap();
    for _ in 0..20 {
        let rho = random_hermitian(&mut r, l.space().dim());
        assert!(hermiticity_defect(&l.apply(&rho)) <= 1e-12);
    }
}

#[test]
fn trace_preserving_at_operating_point() {
    let l = assemble(&operating_point(), &PhononEnv::default()).unwrap();
    assert!(l.trace_defect() <= 1e-10, "{}", l.trace_defect());
}

#[test]
fn hamiltonian_flow_is_anti_hermitian() {
    let mut sys = operating_point();
    sys.gamma = 0.0;
    sys.gamma_prime = 0.0;
    sys.kappa = 0.0;
    let l = assemble(&sys, &PhononEnv::disabled()).unwrap();
    let m = l.matrix();
    assert!(max_abs(&(m + m.adjoint())) <= 1e-14);
}

#[test]
fn spectrum_is_stable() {
    let l = assemble(&operating_point(), &PhononEnv::default()).unwrap();
    let eig = l
        .matrix()
        .clone()
        .schur()
        .eigenvalues()
        .expect("triangular complex Schur form");
    let worst = eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    assert!(worst <= 1e-10, "{worst}");
}

#[test]
fn hamiltonian_is_hermitian_for_random_draws() {
    let mut r = rng(14);
    for _ in 0..20 {
        let sys = common::random_params(&mut r);
        let l = assemble(&sys, &PhononEnv::default()).unwrap();
        assert_eq!(l.hamiltonian().hermiticity_defect(), 0.0);
    }
}

#[test]
fn free_exciton_decay() {
    let mut sys = SystemParams::renormalized(0.0, 0.0, -30.0, -10.0, 45.0);
    sys.gamma = 3.0;
    sys.n_fock = 2;
    let l = assemble(&sys, &PhononEnv::disabled()).unwrap();
    let rho0 = DensityMatrix::basis(l.space(), 1, 0);
    let traj = evolve(&l, &rho0, 600.0, 1.0).unwrap();
    let e = l.space().index(1, 0);
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let expected = (-sys.gamma * t / PhysConstants::HBAR).exp();
        assert!((s[(e, e)].re - expected).abs() <= 1e-8, "t = {t}");
    }
}
