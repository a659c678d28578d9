use thiserror::Error;

/// Errors raised by the physics modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A thermal state does not fit into the requested Fock cutoff.
    #[error("cutoff {cutoff} too small for mode {mode}: tail mass {tail_mass:.3e} exceeds {tolerance:.1e}, need cutoff >= {required}")]
    CutoffTooSmall {
        mode: usize,
        cutoff: usize,
        required: usize,
        tail_mass: f64,
        tolerance: f64,
    },

    /// The Fock basis would exceed the dense-matrix dimension cap.
    #[error("Fock dimension {dimension} exceeds the cap of {cap}")]
    DimensionCap { dimension: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// Population reached the top Fock level during evolution.
    #[error("truncation: top-level occupation {occupation:.3e} in mode {mode} exceeds {tolerance:.1e}")]
    Truncation {
        mode: usize,
        occupation: f64,
        tolerance: f64,
    },

    /// A numerical self-check (unitarity, symmetry, trace, convergence) failed.
    #[error("numerical tolerance: {0}")]
    Tolerance(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn tolerance(msg: impl Into<String>) -> Self {
        Error::Tolerance(msg.into())
    }

    /// True for failures of a numerical self-check rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Tolerance(_) | Error::Truncation { .. } | Error::CutoffTooSmall { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
