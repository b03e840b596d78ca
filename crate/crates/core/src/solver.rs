//! Steady states, time evolution, and Fock-truncation convergence.

use alloc::vec::Vec;

use crate::bath::BathKernel;
use crate::error::{Error, Result};
use crate::linalg::{largest_singular_value, smallest_singular_value, ComplexLu};
use crate::liouvillian::{
    assemble_with_kernel, unvectorize, vectorize, Liouvillian, PhononScattering,
};
use crate::observables::Moments;
use crate::operators::{max_abs, validate_state, DensityMatrix, QOperator};
use crate::params::{PhononEnv, SystemParams, MIN_FOCK};
use crate::{DMatrix, DVector, C64};

/// Smallest accepted σ₂(L)/σ_max(L).
pub const GAP_TOL: f64 = 1e-8;
/// Residual bound relative to ‖L‖₂.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Largest accepted Hermitization correction (max-norm).
pub const HERMITIZATION_TOL: f64 = 1e-8;
/// Truncation convergence thresholds on ⟨a†a⟩ and ⟨:ΔX²:⟩.
pub const NUMBER_TOL: f64 = 1e-6;
pub const VARIANCE_TOL: f64 = 1e-7;
pub const MAX_FOCK: usize = 20;

#[derive(Debug, Clone)]
pub struct SteadyStateResult {
    pub rho: DensityMatrix,
    /// ‖L vec(ρ)‖₂ in ps⁻¹.
    pub residual: f64,
    /// ‖L‖₂ in ps⁻¹, by power iteration.
    pub norm: f64,
    /// Second-smallest singular value of L over its largest, by inverse
    /// iteration on the deflated generator.
    pub gap: f64,
    /// Max-norm of the correction applied by Hermitization.
    pub hermitization: f64,
    pub n_fock_used: usize,
}

/// Solves L vec(ρ) = 0 with Tr ρ = 1 by replacing the first row with the
/// trace functional. Returns the Hermitized ρ and the correction size.
fn solve_linear(l: &Liouvillian) -> Result<(DMatrix<C64>, f64)> {
    let d = l.space().dim();
    let mut m = l.matrix().clone();
    for col in 0..d * d {
        m[(0, col)] = C64::new(0.0, 0.0);
    }
    for i in 0..d {
        m[(0, i * d + i)] = C64::new(1.0, 0.0);
    }
    let lu = ComplexLu::factor(&m).ok_or(Error::SingularSystem)?;
    let mut v = alloc::vec![C64::new(0.0, 0.0); d * d];
    v[0] = C64::new(1.0, 0.0);
    lu.solve(&mut v);
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SingularSystem);
    }
    let rho = unvectorize(&DVector::from_vec(v), d);
    let herm = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    let correction = max_abs(&(&herm - &rho));
    Ok((herm, correction))
}

/// σ₂(L) for a generator with right null vector vec(ρ) and left null vector
/// vec(1). The deflated matrix L + s·u₀v₀† with unit u₀ ∝ vec(1), v₀ ∝ vec(ρ)
/// and s = ‖L‖_F has singular values {s} ∪ {σ_i(L) : i ≥ 2}, so its smallest
/// singular value is σ₂(L).
fn second_singular_value(l: &Liouvillian, rho: &DMatrix<C64>) -> f64 {
    let d = l.space().dim();
    let mut deflated = l.matrix().clone();
    let s = deflated.norm();
    let v0 = vectorize(rho);
    let v0 = &v0 / C64::new(v0.norm(), 0.0);
    let u = s / libm::sqrt(d as f64);
    for i in 0..d {
        let row = i * d + i;
        for col in 0..d * d {
            deflated[(row, col)] += v0[col].conj() * u;
        }
    }
    match ComplexLu::factor(&deflated) {
        Some(lu) => smallest_singular_value(&lu),
        None => 0.0,
    }
}

/// σ₂(L)/σ_max(L) from a full singular value decomposition.
pub fn exact_gap(l: &Liouvillian) -> f64 {
    let sv = l.matrix().clone().singular_values();
    let mut s: Vec<f64> = sv.iter().copied().collect();
    s.sort_by(|a, b| a.total_cmp(b));
    let norm = *s.last().unwrap_or(&0.0);
    if s.len() > 1 && norm > 0.0 {
        s[1] / norm
    } else {
        0.0
    }
}

/// Validates a candidate steady state and measures residual and gap.
fn certify(l: &Liouvillian, rho: DMatrix<C64>, correction: f64) -> Result<SteadyStateResult> {
    if correction > HERMITIZATION_TOL {
        return Err(Error::HermitizationTooLarge { correction });
    }
    validate_state(&rho)?;
    let norm = largest_singular_value(l.matrix());
    let gap = if norm > 0.0 {
        second_singular_value(l, &rho) / norm
    } else {
        0.0
    };
    if gap.is_nan() || gap <= GAP_TOL {
        return Err(Error::NonUniqueSteadyState { gap });
    }
    let residual = (l.matrix() * vectorize(&rho)).norm();
    if residual > RESIDUAL_TOL * norm {
        return Err(Error::SingularSystem);
    }
    let space = l.space();
    Ok(SteadyStateResult {
        rho: DensityMatrix::new(QOperator::from_matrix(space, rho)?)?,
        residual,
        norm,
        gap,
        hermitization: correction,
        n_fock_used: space.n_fock(),
    })
}

/// Unique steady state of `l`.
pub fn steady_state(l: &Liouvillian) -> Result<SteadyStateResult> {
    let (rho, correction) = solve_linear(l)?;
    certify(l, rho, correction)
}

/// Accepted states of an adaptive integration.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DMatrix<C64>>,
    /// Largest |Tr ρ − 1| seen along the way.
    pub max_trace_deviation: f64,
}

impl Trajectory {
    pub fn final_state(&self, l: &Liouvillian) -> Result<DensityMatrix> {
        let last = self
            .states
            .last()
            .expect("trajectory holds the initial state")
            .clone();
        DensityMatrix::new(QOperator::from_matrix(l.space(), last)?)
    }
}

pub const EVOLVE_RTOL: f64 = 1e-9;
pub const EVOLVE_ATOL: f64 = 1e-12;

// Dormand–Prince 5(4) tableau
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates dρ/dt = L ρ from `rho0` to `t_final` (ps) with an embedded
/// Dormand–Prince 5(4) pair, relative tolerance 1e-9.
pub fn evolve(
    l: &Liouvillian,
    rho0: &DensityMatrix,
    t_final: f64,
    dt_hint: f64,
) -> Result<Trajectory> {
    assert!(t_final > 0.0, "t_final must be positive");
    let d = l.space().dim();
    let lm = l.matrix();
    let trace_of = |y: &DVector<C64>| -> C64 { (0..d).map(|i| y[i * d + i]).sum() };

    let mut y = vectorize(rho0.matrix());
    let mut t = 0.0;
    let mut h = if dt_hint > 0.0 {
        dt_hint.min(t_final)
    } else {
        t_final / 100.0
    };
    let mut traj = Trajectory {
        times: alloc::vec![0.0],
        states: alloc::vec![rho0.matrix().clone()],
        max_trace_deviation: 0.0,
    };
    let mut k: [DVector<C64>; 7] = core::array::from_fn(|_| DVector::zeros(d * d));
    k[0] = lm * &y;

    while t < t_final {
        if t + h > t_final {
            h = t_final - t;
        }
        if h < 1e-14 * t_final.max(1.0) {
            return Err(Error::StepSizeUnderflow { t });
        }
        for s in 1..7 {
            let mut stage = y.clone();
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    stage.axpy(C64::new(h * a, 0.0), kj, C64::new(1.0, 0.0));
                }
            }
            k[s] = lm * stage;
        }
        let mut y5 = y.clone();
        let mut err = DVector::<C64>::zeros(d * d);
        for s in 0..7 {
            if B5[s] != 0.0 {
                y5.axpy(C64::new(h * B5[s], 0.0), &k[s], C64::new(1.0, 0.0));
            }
            let e = B5[s] - B4[s];
            if e != 0.0 {
                err.axpy(C64::new(h * e, 0.0), &k[s], C64::new(1.0, 0.0));
            }
        }
        let mut ratio: f64 = 0.0;
        for i in 0..d * d {
            let scale = EVOLVE_ATOL + EVOLVE_RTOL * y[i].norm().max(y5[i].norm());
            ratio = ratio.max(err[i].norm() / scale);
        }
        if ratio <= 1.0 {
            t += h;
            y = y5;
            // first-same-as-last
            k[0] = k[6].clone();
            let dev = (trace_of(&y) - C64::new(1.0, 0.0)).norm();
            traj.max_trace_deviation = traj.max_trace_deviation.max(dev);
            traj.times.push(t);
            traj.states.push(unvectorize(&y, d));
        }
        let factor = if ratio == 0.0 {
            5.0
        } else {
            (0.9 * libm::pow(ratio, -0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    Ok(traj)
}

/// Steady state with the Fock cutoff raised in steps of two from N = 2 until
/// ⟨a†a⟩ and ⟨:ΔX²:⟩ agree between consecutive cutoffs. The lower cutoff of
/// the agreeing pair is returned.
pub fn converge_truncation(sys: &SystemParams, env: &PhononEnv) -> Result<SteadyStateResult> {
    let kernel = BathKernel::new(env)?;
    converge_truncation_with_kernel(sys, &kernel, PhononScattering::Included)
}

pub fn converge_truncation_with_kernel(
    sys: &SystemParams,
    kernel: &BathKernel,
    scattering: PhononScattering,
) -> Result<SteadyStateResult> {
    sys.validate()?;
    let mut previous: Option<(Liouvillian, DMatrix<C64>, f64, f64, f64)> = None;
    let mut n = MIN_FOCK;
    while n <= MAX_FOCK {
        let l = assemble_with_kernel(&sys.with_n_fock(n), kernel, scattering)?;
        let (rho, correction) = solve_linear(&l)?;
        let state = DensityMatrix::new(QOperator::from_matrix(l.space(), rho.clone())?)?;
        let m = Moments::of(&state);
        let (number, variance) = (m.adag_a, m.variance(0.0));
        if let Some((pl, prho, pcorr, pnum, pvar)) = previous.take() {
            if (number - pnum).abs() <= NUMBER_TOL && (variance - pvar).abs() <= VARIANCE_TOL {
                return certify(&pl, prho, pcorr);
            }
        }
        previous = Some((l, rho, correction, number, variance));
        n += 2;
    }
    Err(Error::TruncationNotConverged { n_max: MAX_FOCK })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouvillian::assemble;
    use crate::operators::HilbertSpace;

    #[test]
    fn undriven_dot_relaxes_to_ground() {
        let sys = SystemParams::renormalized(0.0, 75.0, -75.0, -27.0, 45.0);
        let l = assemble(&sys, &PhononEnv::disabled()).unwrap();
        let ss = steady_state(&l).unwrap();
        let ground = DensityMatrix::basis(HilbertSpace::new(sys.n_fock), 0, 0);
        assert!(max_abs(&(ss.rho.matrix() - ground.matrix())) < 1e-10);
        assert!(ss.gap > GAP_TOL);
    }

    #[test]
    fn undriven_converges_at_minimum_cutoff() {
        let sys = SystemParams::renormalized(0.0, 75.0, -75.0, -27.0, 45.0);
        let r = converge_truncation(&sys, &PhononEnv::default()).unwrap();
        assert_eq!(r.n_fock_used, 2);
    }

    #[test]
    fn zero_generator_keeps_state() {
        let space = HilbertSpace::new(2);
        let l = Liouvillian::from_parts(QOperator::zeros(space), alloc::vec![]).unwrap();
        let rho = DensityMatrix::basis(space, 1, 1);
        let traj = evolve(&l, &rho, 10.0, 0.5).unwrap();
        assert!(traj.states.iter().all(|s| s == rho.matrix()));
        assert!(steady_state(&l).is_err());
    }
}
