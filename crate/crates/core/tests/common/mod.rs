#![allow(dead_code)]

use polaron_core::{DMatrix, DensityMatrix, HilbertSpace, QOperator, SystemParams, C64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut StdRng, dim: usize) -> DMatrix<C64> {
    DMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_hermitian(rng: &mut StdRng, dim: usize) -> DMatrix<C64> {
    let g = random_complex(rng, dim);
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}

/// G G† / Tr(G G†): full-rank and well inside the positive cone.
pub fn random_state(rng: &mut StdRng, space: HilbertSpace) -> DensityMatrix {
    let g = random_complex(rng, space.dim());
    let m = &g * g.adjoint();
    let tr = m.trace();
    let m = m / tr;
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::new(QOperator::from_matrix(space, m).unwrap()).unwrap()
}

/// Paper operating point: Ω_R = 50, g_R = 75, κ = 45, Δ_xl = −75,
/// Δ_cl = −0.3√(Ω_R² + Δ_xl²) μeV.
pub fn operating_point() -> SystemParams {
    let dcl = -0.3 * (50.0f64 * 50.0 + 75.0 * 75.0).sqrt();
    SystemParams::renormalized(50.0, 75.0, -75.0, dcl, 45.0)
}

/// Renormalized parameters drawn from the physical ranges explored in the
/// figures.
pub fn random_params(rng: &mut StdRng) -> SystemParams {
    let mut sys = SystemParams::renormalized(
        rng.random_range(5.0..80.0),
        rng.random_range(10.0..100.0),
        rng.random_range(-150.0..50.0),
        rng.random_range(-150.0..50.0),
        rng.random_range(20.0..100.0),
    );
    sys.gamma = rng.random_range(0.5..5.0);
    sys.gamma_prime = rng.random_range(0.0..2.0);
    sys.n_fock = 6;
    sys
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
