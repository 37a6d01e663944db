use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spin quantum number {0}: expected a positive half-integer")]
    InvalidSpin(f64),

    #[error("vector is not unit length (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("parameter {name} = {value} outside [{lo}, {hi}]")]
    OutOfRange { name: &'static str, value: f64, lo: f64, hi: f64 },

    #[error("invalid mixture weights: {0}")]
    InvalidWeights(String),

    #[error("{0} does not describe a pure state")]
    NotPure(&'static str),

    #[error("correlation matrix vanishes; every setting is optimal")]
    DegenerateCorrelation,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that signal a broken physical invariant of an input
    /// (non-Hermitian, non-PSD, unnormalized), as opposed to malformed input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvalidDensity(_) | Error::NotNormalized(_) | Error::NotUnitVector { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
