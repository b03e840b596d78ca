//! Steady-state model of a coherently driven quantum dot coupled to a single
//! cavity mode, with longitudinal-acoustic phonon coupling treated through an
//! effective polaron master equation.
//!
//! The crate is `no_std` (it needs `alloc`). All energies are in μeV, times in
//! ps, angular frequencies in rad/ps and temperatures in K; see [`units`].
//!
//! Basis ordering is QD-major: the index of `|q, n⟩` is `q·(N+1) + n` with
//! `q = 0` for the ground state and `q = 1` for the exciton.

#![no_std]

extern crate alloc;

pub mod bath;
pub mod error;
pub mod linalg;
pub mod liouvillian;
pub mod observables;
pub mod operators;
pub mod params;
pub mod quadrature;
pub mod solver;
pub mod special;
pub mod units;

pub use nalgebra::{Complex, DMatrix, DVector};

/// Complex scalar used throughout.
pub type C64 = Complex<f64>;

pub use bath::{BathKernel, PhononRates};
pub use error::{Error, ParamError, Result};
pub use liouvillian::{Liouvillian, PhononScattering, Superoperator};
pub use observables::ObservableSet;
pub use operators::{DensityMatrix, HilbertSpace, Operators, QOperator};
pub use params::{InputMode, PhononEnv, SystemParams};
pub use solver::{SteadyStateResult, Trajectory};
