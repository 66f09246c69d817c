use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max |H - H^dagger| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{engine} cutoff n_max = {n_max} does not exceed the photon-number scale {scale:.2}")]
    CutoffTooSmall {
        engine: &'static str,
        n_max: usize,
        scale: f64,
    },

    #[error("Fock truncation exceeded: top-level population {population:e} after step {step}")]
    Truncation { step: usize, population: f64 },

    #[error("output overlap {overlap:.6} for input {input} is below {threshold}")]
    OverlapCheck {
        input: String,
        overlap: f64,
        threshold: f64,
    },

    #[error("schedule cannot be composed analytically: {0}")]
    NotComposable(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
