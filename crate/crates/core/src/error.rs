//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the simulator. Nothing in this crate panics on bad
/// numerical input; every validation failure comes back through here.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parameter {name} = {value} outside {expected}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("matrix is not Hermitian (max |m - m†| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue = {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix has non-unit trace (trace = {trace:.12})")]
    NotUnitTrace { trace: f64 },

    #[error("matrix contains a non-finite entry")]
    NonFiniteEntry,

    #[error("Kraus operators are not complete (max |ΣK†K - I| = {residual:.3e})")]
    IncompleteChannel { residual: f64 },

    #[error("matrix is not unitary (max |U†U - I| = {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("input vectors are not orthonormal (max Gram deviation = {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("orthonormal-basis completion failed: {accepted} of {needed} vectors found")]
    CompletionFailure { accepted: usize, needed: usize },

    #[error("measurement operator exceeds unity (max eigenvalue of M†M = {max_eigenvalue:.12})")]
    InvalidMeasurementOperator { max_eigenvalue: f64 },

    #[error("singular parameter combination: {0}")]
    SingularParameter(String),

    #[error("eigenvalue iteration failed to converge after {iterations} steps")]
    ConvergenceFailure { iterations: usize },

    #[error("spectrum expected real but eigenvalue has imaginary part {imaginary:.3e}")]
    ComplexSpectrum { imaginary: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of a numerical verification (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian { .. }
                | Error::NotPositive { .. }
                | Error::NotUnitary { .. }
                | Error::IncompleteChannel { .. }
                | Error::ConvergenceFailure { .. }
                | Error::ComplexSpectrum { .. }
                | Error::CompletionFailure { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
