//! Truncated qubit⊗Fock Hilbert space and the operators acting on it.

use core::ops::Deref;

use crate::error::{Error, Result};
use crate::{DMatrix, C64};

/// Two-level dot ⊗ cavity with photons `0..=n_fock`, QD factor first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertSpace {
    n_fock: usize,
}

impl HilbertSpace {
    pub const DIM_QD: usize = 2;

    pub fn new(n_fock: usize) -> Self {
        Self { n_fock }
    }

    pub fn n_fock(&self) -> usize {
        self.n_fock
    }

    pub fn dim_cavity(&self) -> usize {
        self.n_fock + 1
    }

    pub fn dim(&self) -> usize {
        Self::DIM_QD * self.dim_cavity()
    }

    /// Basis index of `|qd, photons⟩` (`qd` 0 = ground, 1 = exciton).
    pub fn index(&self, qd: usize, photons: usize) -> usize {
        debug_assert!(qd < 2 && photons <= self.n_fock);
        qd * self.dim_cavity() + photons
    }

    fn check(&self, other: &HilbertSpace) -> Result<()> {
        if self != other {
            return Err(Error::SpaceMismatch {
                left: self.n_fock,
                right: other.n_fock,
            });
        }
        Ok(())
    }
}

/// Dense square operator on a [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct QOperator {
    space: HilbertSpace,
    matrix: DMatrix<C64>,
}

impl QOperator {
    pub fn from_matrix(space: HilbertSpace, matrix: DMatrix<C64>) -> Result<Self> {
        let d = space.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            let n = matrix.nrows() / 2;
            return Err(Error::SpaceMismatch {
                left: space.n_fock,
                right: n.saturating_sub(1),
            });
        }
        Ok(Self { space, matrix })
    }

    pub fn zeros(space: HilbertSpace) -> Self {
        let d = space.dim();
        Self {
            space,
            matrix: DMatrix::zeros(d, d),
        }
    }

    pub fn identity(space: HilbertSpace) -> Self {
        let d = space.dim();
        Self {
            space,
            matrix: DMatrix::identity(d, d),
        }
    }

    /// `|ket⟩⟨bra|` on basis indices.
    pub fn outer(space: HilbertSpace, ket: usize, bra: usize) -> Self {
        let mut op = Self::zeros(space);
        op.matrix[(ket, bra)] = C64::new(1.0, 0.0);
        op
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn mul(&self, rhs: &QOperator) -> Result<Self> {
        self.space.check(&rhs.space)?;
        Ok(Self {
            space: self.space,
            matrix: &self.matrix * &rhs.matrix,
        })
    }

    pub fn add(&self, rhs: &QOperator) -> Result<Self> {
        self.space.check(&rhs.space)?;
        Ok(Self {
            space: self.space,
            matrix: &self.matrix + &rhs.matrix,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            space: self.space,
            matrix: &self.matrix * C64::new(factor, 0.0),
        }
    }

    /// [A, B] = AB − BA
    pub fn commutator(&self, rhs: &QOperator) -> Result<Self> {
        self.space.check(&rhs.space)?;
        Ok(Self {
            space: self.space,
            matrix: &self.matrix * &rhs.matrix - &rhs.matrix * &self.matrix,
        })
    }

    /// Largest absolute entry of `A − A†`.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// The ladder and transition operators of the dot-cavity system.
#[derive(Debug, Clone)]
pub struct Operators {
    pub space: HilbertSpace,
    /// σ⁺ = |e⟩⟨g| ⊗ 1
    pub sigma_plus: QOperator,
    /// σ⁻ = |g⟩⟨e| ⊗ 1
    pub sigma_minus: QOperator,
    /// 1 ⊗ a, truncated at N photons
    pub a: QOperator,
    pub a_dagger: QOperator,
    pub identity: QOperator,
}

impl Operators {
    pub fn new(space: HilbertSpace) -> Self {
        let d = space.dim();
        let nc = space.dim_cavity();
        let mut a = DMatrix::<C64>::zeros(d, d);
        let mut sm = DMatrix::<C64>::zeros(d, d);
        for q in 0..2 {
            for n in 1..nc {
                a[(space.index(q, n - 1), space.index(q, n))] = C64::new(libm::sqrt(n as f64), 0.0);
            }
        }
        for n in 0..nc {
            sm[(space.index(0, n), space.index(1, n))] = C64::new(1.0, 0.0);
        }
        let a = QOperator { space, matrix: a };
        let sigma_minus = QOperator { space, matrix: sm };
        Self {
            space,
            sigma_plus: sigma_minus.adjoint(),
            a_dagger: a.adjoint(),
            sigma_minus,
            a,
            identity: QOperator::identity(space),
        }
    }

    /// σ⁺σ⁻, the exciton projector.
    pub fn exciton_projector(&self) -> QOperator {
        self.sigma_plus.mul(&self.sigma_minus).expect("same space")
    }

    /// a†a
    pub fn number(&self) -> QOperator {
        self.a_dagger.mul(&self.a).expect("same space")
    }
}

/// Hermiticity tolerance for density matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Hermitian, unit-trace, positive-semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(QOperator);

impl DensityMatrix {
    /// Validates the state invariants.
    pub fn new(op: QOperator) -> Result<Self> {
        validate_state(&op.matrix)?;
        Ok(Self(op))
    }

    /// Pure basis state `|q, n⟩⟨q, n|`.
    pub fn basis(space: HilbertSpace, qd: usize, photons: usize) -> Self {
        let i = space.index(qd, photons);
        Self(QOperator::outer(space, i, i))
    }

    /// `|ψ⟩⟨ψ|` for a state vector (normalized here).
    pub fn pure(space: HilbertSpace, psi: &[C64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        let norm = v.norm();
        let v = v / C64::new(norm, 0.0);
        let m = &v * v.adjoint();
        Self::new(QOperator::from_matrix(space, m)?)
    }

    /// ρ_QD ⊗ ρ_cav, with ρ_QD 2×2 and ρ_cav (N+1)×(N+1).
    pub fn product(qd: &DMatrix<C64>, cavity: &DMatrix<C64>) -> Result<Self> {
        let space = HilbertSpace::new(cavity.nrows() - 1);
        Self::new(QOperator::from_matrix(space, qd.kronecker(cavity))?)
    }

    pub fn operator(&self) -> &QOperator {
        &self.0
    }

    pub fn into_operator(self) -> QOperator {
        self.0
    }
}

impl Deref for DensityMatrix {
    type Target = QOperator;

    fn deref(&self) -> &QOperator {
        &self.0
    }
}

/// Checks Hermiticity, unit trace and positivity of a density matrix.
pub fn validate_state(m: &DMatrix<C64>) -> Result<()> {
    let herm = max_abs(&(m - m.adjoint()));
    if herm > HERMITIAN_TOL {
        return Err(Error::InvalidDensityMatrix {
            what: "hermiticity",
            deviation: herm,
        });
    }
    let tr = m.trace();
    let dev = (tr - C64::new(1.0, 0.0)).norm();
    if dev > TRACE_TOL {
        return Err(Error::InvalidDensityMatrix {
            what: "trace",
            deviation: dev,
        });
    }
    let min = min_eigenvalue(m);
    if min < -POSITIVITY_TOL {
        return Err(Error::PositivityViolation {
            min_eigenvalue: min,
        });
    }
    Ok(())
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eigenvalue(m: &DMatrix<C64>) -> f64 {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues()
        .iter()
        .fold(f64::INFINITY, |acc, &x| acc.min(x))
}

/// Tr(O ρ)
pub fn expectation(op: &QOperator, rho: &DensityMatrix) -> Result<C64> {
    op.space.check(&rho.space)?;
    let (o, r) = (&op.matrix, &rho.matrix);
    let d = o.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..d {
        for k in 0..d {
            acc += o[(i, k)] * r[(k, i)];
        }
    }
    Ok(acc)
}

/// Traces out the dot: (ρ_cav)_{nm} = Σ_q ρ_{(q,n),(q,m)}.
pub fn partial_trace_qd(rho: &DensityMatrix) -> DMatrix<C64> {
    let space = rho.space;
    let nc = space.dim_cavity();
    DMatrix::from_fn(nc, nc, |n, m| {
        (0..2)
            .map(|q| rho.matrix[(space.index(q, n), space.index(q, m))])
            .sum()
    })
}

/// Traces out the cavity, giving the 2×2 dot state.
pub fn partial_trace_cavity(rho: &DensityMatrix) -> DMatrix<C64> {
    let space = rho.space;
    DMatrix::from_fn(2, 2, |p, q| {
        (0..space.dim_cavity())
            .map(|n| rho.matrix[(space.index(p, n), space.index(q, n))])
            .sum()
    })
}
