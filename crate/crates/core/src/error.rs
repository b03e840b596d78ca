use core::fmt;

/// A parameter that failed validation, named by its field.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamError {
    pub field: &'static str,
    pub value: f64,
    pub requirement: &'static str,
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "`{}` = {} violates: {}",
            self.field, self.value, self.requirement
        )
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(ParamError),

    #[error("operator spaces differ (N = {left} vs N = {right})")]
    SpaceMismatch { left: usize, right: usize },

    #[error(
        "{what}: quadrature did not converge (node doubling changed the result by {change:.3e})"
    )]
    QuadratureNotConverged { what: &'static str, change: f64 },

    #[error("{what}: phonon phase still {residual:.3e} at the largest supported correlation time; temperature too low for time-domain quadrature")]
    CorrelationTail { what: &'static str, residual: f64 },

    #[error("negative rate {value:.3e} μeV for channel {channel}")]
    NegativeRate { channel: &'static str, value: f64 },

    #[error("steady-state linear system is singular")]
    SingularSystem,

    #[error("non-unique steady state (relative gap {gap:.3e})")]
    NonUniqueSteadyState { gap: f64 },

    #[error("Hermitization correction {correction:.3e} exceeds tolerance")]
    HermitizationTooLarge { correction: f64 },

    #[error("density matrix not positive: minimum eigenvalue {min_eigenvalue:.3e}")]
    PositivityViolation { min_eigenvalue: f64 },

    #[error("density matrix invalid: {what} deviation {deviation:.3e}")]
    InvalidDensityMatrix { what: &'static str, deviation: f64 },

    #[error("integration step size underflow at t = {t} ps")]
    StepSizeUnderflow { t: f64 },

    #[error("Fock truncation did not converge by N = {n_max}")]
    TruncationNotConverged { n_max: usize },
}

impl From<ParamError> for Error {
    fn from(e: ParamError) -> Self {
        Error::Param(e)
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
