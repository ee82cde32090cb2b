use thiserror::Error;

/// Errors raised by lattice construction, coding and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("non-finite input vector")]
    NonFinite,

    #[error("unsupported lattice: {0}")]
    Unsupported(String),

    #[error("nesting violation: level {coarse} is not a sublattice of level {fine}")]
    NestingViolation { coarse: usize, fine: usize },

    #[error("enumeration of {count} points exceeds the cap of {cap}")]
    EnumerationCap { count: u128, cap: u128 },

    #[error("message index {index} out of range for a codebook of {size} points")]
    MessageOutOfRange { index: usize, size: usize },

    #[error("distortion {requested} is below the feasibility bound {minimum}")]
    InfeasibleDistortion { requested: f64, minimum: f64 },

    #[error("no code in the lattice family realizes {0}")]
    NoCode(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
