//! Hamiltonian and vectorized master-equation generator.
//!
//! Vectorization stacks columns: `vec(A X B) = (Bᵀ ⊗ A) vec(X)`. Superoperators
//! built here carry μeV until [`Liouvillian::from_parts`] divides the total by ħ.

use alloc::vec::Vec;

use crate::bath::{BathKernel, PhononRates};
use crate::error::{Error, Result};
use crate::operators::{max_abs, HilbertSpace, Operators, QOperator};
use crate::params::{PhononEnv, SystemParams};
use crate::units::PhysConstants;
use crate::{DMatrix, DVector, C64};

/// Column-stacked `vec(m)`.
pub fn vectorize(m: &DMatrix<C64>) -> DVector<C64> {
    DVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vectorize`] for a `d × d` matrix.
pub fn unvectorize(v: &DVector<C64>, d: usize) -> DMatrix<C64> {
    DMatrix::from_column_slice(d, d, v.as_slice())
}

/// Linear map on column-stacked `d × d` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: DMatrix<C64>,
}

impl Superoperator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            matrix: DMatrix::zeros(dim * dim, dim * dim),
        }
    }

    /// Hilbert-space dimension `d` (the matrix is `d² × d²`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        unvectorize(&(&self.matrix * vectorize(rho)), self.dim)
    }

    fn add_assign(&mut self, other: &Superoperator) {
        self.matrix += &other.matrix;
    }

    /// `self += coeff · (a ⊗ b)`
    fn add_kron(&mut self, coeff: C64, a: &DMatrix<C64>, b: &DMatrix<C64>) {
        let d = self.dim;
        for j in 0..d {
            for i in 0..d {
                let aij = a[(i, j)];
                if aij.re == 0.0 && aij.im == 0.0 {
                    continue;
                }
                let s = coeff * aij;
                for l in 0..d {
                    for k in 0..d {
                        let bkl = b[(k, l)];
                        if bkl.re != 0.0 || bkl.im != 0.0 {
                            self.matrix[(i * d + k, j * d + l)] += s * bkl;
                        }
                    }
                }
            }
        }
    }
}

/// H_S in μeV:
/// Δ_xl σ⁺σ⁻ + Δ_cl a†a + ⟨B⟩(Ω/2 (σ⁺ + σ⁻) + g_c (σ⁺a + a†σ⁻)).
pub fn build_hamiltonian(ops: &Operators, sys: &SystemParams, b_mean: f64) -> QOperator {
    let b = b_mean;
    let omega = sys.bare_omega(b);
    let g = sys.bare_g(b);
    let pe = ops.exciton_projector();
    let n = ops.number();
    let drive = ops.sigma_plus.add(&ops.sigma_minus).expect("same space");
    let sp_a = ops.sigma_plus.mul(&ops.a).expect("same space");
    let coupling = sp_a.add(&sp_a.adjoint()).expect("same space");

    let m = pe.matrix() * C64::new(sys.delta_xl, 0.0)
        + n.matrix() * C64::new(sys.delta_cl, 0.0)
        + drive.matrix() * C64::new(b * omega / 2.0, 0.0)
        + coupling.matrix() * C64::new(b * g, 0.0);
    QOperator::from_matrix(ops.space, m).expect("same space")
}

/// −i[H, ·] as a superoperator, in the units of `h`.
pub fn commutator_superoperator(h: &QOperator) -> Superoperator {
    let d = h.space().dim();
    let id = DMatrix::<C64>::identity(d, d);
    let mut s = Superoperator::zeros(d);
    let minus_i = C64::new(0.0, -1.0);
    s.add_kron(minus_i, &id, h.matrix());
    s.add_kron(-minus_i, &h.matrix().transpose(), &id);
    s
}

/// (rate/2)·𝒜[O] with 𝒜[O]ρ = 2OρO† − O†Oρ − ρO†O, in the units of `rate`.
pub fn dissipator(rate: f64, collapse: &QOperator) -> Result<Superoperator> {
    if rate.is_nan() || rate < 0.0 {
        return Err(Error::NegativeRate {
            channel: "dissipator",
            value: rate,
        });
    }
    let d = collapse.space().dim();
    let mut s = Superoperator::zeros(d);
    if rate == 0.0 {
        return Ok(s);
    }
    let o = collapse.matrix();
    let odo = o.adjoint() * o;
    let id = DMatrix::<C64>::identity(d, d);
    let r = C64::new(rate, 0.0);
    s.add_kron(r, &o.map(|z| z.conj()), o);
    s.add_kron(-r * 0.5, &id, &odo);
    s.add_kron(-r * 0.5, &odo.transpose(), &id);
    Ok(s)
}

/// Whether the four phonon-induced scattering channels enter the generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhononScattering {
    #[default]
    Included,
    /// Keep the ⟨B⟩ renormalization but drop the incoherent rates.
    Excluded,
}

/// One Lindblad channel: rate (μeV) and collapse operator.
#[derive(Debug, Clone)]
pub struct Channel {
    pub name: &'static str,
    pub rate: f64,
    pub collapse: QOperator,
}

/// Master-equation generator acting on column-stacked ρ, in rad/ps.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    space: HilbertSpace,
    matrix: DMatrix<C64>,
    hamiltonian: QOperator,
    channels: Vec<Channel>,
}

impl Liouvillian {
    /// −(i/ħ)[H, ρ] + Σ (Γ/2ħ)𝒜[O]ρ with H and Γ in μeV.
    pub fn from_parts(hamiltonian: QOperator, channels: Vec<Channel>) -> Result<Self> {
        let space = hamiltonian.space();
        let mut total = commutator_superoperator(&hamiltonian);
        for ch in &channels {
            if ch.collapse.space() != space {
                return Err(Error::SpaceMismatch {
                    left: space.n_fock(),
                    right: ch.collapse.space().n_fock(),
                });
            }
            if ch.rate.is_nan() || ch.rate < 0.0 {
                return Err(Error::NegativeRate {
                    channel: ch.name,
                    value: ch.rate,
                });
            }
            total.add_assign(&dissipator(ch.rate, &ch.collapse)?);
        }
        // the single μeV → rad/ps conversion
        let matrix = total.matrix / C64::new(PhysConstants::HBAR, 0.0);
        Ok(Self {
            space,
            matrix,
            hamiltonian,
            channels,
        })
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn hamiltonian(&self) -> &QOperator {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    /// dρ/dt in ps⁻¹.
    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        unvectorize(&(&self.matrix * vectorize(rho)), self.space.dim())
    }

    /// max |(vec 1)ᵀ L|, zero for a trace-preserving generator.
    pub fn trace_defect(&self) -> f64 {
        let d = self.space.dim();
        let mut worst: f64 = 0.0;
        for col in 0..d * d {
            let s: C64 = (0..d).map(|i| self.matrix[(i * d + i, col)]).sum();
            worst = worst.max(s.norm());
        }
        worst
    }
}

/// The seven channels of the polaron master equation. The phonon channels are
/// left out when `rates` is `None`.
pub fn channels(ops: &Operators, sys: &SystemParams, rates: Option<&PhononRates>) -> Vec<Channel> {
    let sm_ = ops.sigma_minus.clone();
    let sp_ = ops.sigma_plus.clone();
    let mut out = Vec::with_capacity(7);
    if let Some(r) = rates {
        out.push(Channel {
            name: "phonon sigma_plus",
            rate: r.gamma_sigma_plus,
            collapse: sp_.clone(),
        });
        out.push(Channel {
            name: "phonon sigma_minus",
            rate: r.gamma_sigma_minus,
            collapse: sm_.clone(),
        });
        out.push(Channel {
            name: "phonon adag_sigma_minus",
            rate: r.gamma_adag_sigma_minus,
            collapse: ops.a_dagger.mul(&sm_).expect("same space"),
        });
        out.push(Channel {
            name: "phonon sigma_plus_a",
            rate: r.gamma_sigma_plus_a,
            collapse: sp_.mul(&ops.a).expect("same space"),
        });
    }
    out.push(Channel {
        name: "radiative",
        rate: sys.gamma,
        collapse: sm_,
    });
    out.push(Channel {
        name: "dephasing",
        rate: sys.gamma_prime,
        collapse: ops.exciton_projector(),
    });
    out.push(Channel {
        name: "cavity",
        rate: sys.kappa,
        collapse: ops.a.clone(),
    });
    out
}

/// Full generator for the given system and bath.
pub fn assemble(sys: &SystemParams, env: &PhononEnv) -> Result<Liouvillian> {
    let kernel = BathKernel::new(env)?;
    assemble_with_kernel(sys, &kernel, PhononScattering::Included)
}

/// Generator reusing a precomputed bath kernel.
pub fn assemble_with_kernel(
    sys: &SystemParams,
    kernel: &BathKernel,
    scattering: PhononScattering,
) -> Result<Liouvillian> {
    sys.validate()?;
    let b = kernel.b_mean();
    let rates = kernel.rates(sys)?;
    let ops = Operators::new(HilbertSpace::new(sys.n_fock));
    let h = build_hamiltonian(&ops, sys, b);
    let phonon =
        (kernel.env().enabled && scattering == PhononScattering::Included).then_some(&rates);
    Liouvillian::from_parts(h, channels(&ops, sys, phonon))
}

/// Largest entry of `A − A†`.
pub fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    max_abs(&(m - m.adjoint()))
}
