use thiserror::Error;

use crate::qmatrix::DensityViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors surfaced by the library. Input-domain problems and numerical
/// failures are kept apart so the CLI can map them to distinct exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension {got} exceeds the supported maximum {max}")]
    DimensionOverflow { got: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subsystem index {index} out of range for {qubits} qubits")]
    InvalidSubsystem { index: usize, qubits: usize },

    #[error("matrix is not Hermitian (max |A - A^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(#[from] DensityViolation),

    #[error("{field} = {value} is outside its domain {domain}")]
    OutOfDomain {
        field: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("concurrence {requested} exceeds the attainable maximum {c_max}")]
    ConcurrenceTooLarge { requested: f64, c_max: f64 },

    #[error("reparametrization map is not strictly increasing near p = {0}")]
    NonMonotoneMap(f64),

    #[error("eigenvalue iteration did not converge after {sweeps} sweeps (off-diagonal mass {residual:e})")]
    EigenNoConvergence { sweeps: usize, residual: f64 },

    #[error("quadrature did not converge within depth {max_depth}: partial value {partial}, error estimate {error_estimate:e}")]
    QuadratureNoConvergence {
        partial: f64,
        error_estimate: f64,
        max_depth: usize,
    },
}

impl Error {
    /// True for failures of a numerical method rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EigenNoConvergence { .. } | Error::QuadratureNoConvergence { .. }
        )
    }
}
