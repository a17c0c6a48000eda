use alloc::string::String;
use core::fmt;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(String),
    /// Operands disagree on the Hilbert-space dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// A matrix that must be Hermitian is not.
    NotHermitian { deviation: f64 },
    /// A matrix violates the density-matrix invariants.
    InvalidState(String),
    /// An iterative kernel did not converge or hit a singular system.
    NumericalFailure(String),
    /// The integrator produced a state with a negative eigenvalue beyond tolerance.
    Integration { time: f64, min_eigenvalue: f64 },
    /// The Fock truncation leaves too much population in the top levels.
    Truncation { dim: usize, tail: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::NumericalFailure(msg.into())
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NumericalFailure(_) | Error::Integration { .. } | Error::Truncation { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (max deviation {deviation:e})")
            }
            Error::InvalidState(msg) => write!(f, "invalid density matrix: {msg}"),
            Error::NumericalFailure(msg) => write!(f, "numerical failure: {msg}"),
            Error::Integration { time, min_eigenvalue } => write!(
                f,
                "integration failure at t={time}: eigenvalue {min_eigenvalue:e} below -1e-6, \
                 use a smaller time step"
            ),
            Error::Truncation { dim, tail } => write!(
                f,
                "Fock truncation at dim={dim} leaves population {tail:e} in the top levels, \
                 use a larger dimension"
            ),
        }
    }
}

impl core::error::Error for Error {}
