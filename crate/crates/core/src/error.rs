use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: map acts on T^{expected}, point lives in T^{got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    #[error("theorem bounds undefined: the spectrum has no positive exponent")]
    UndefinedBounds,

    #[error("insufficient sampling: {found} members found in {proposals} proposals (need at least {required})")]
    InsufficientSampling {
        found: usize,
        proposals: usize,
        required: usize,
    },

    #[error("insufficient data: {usable} usable radii, at least {required} required")]
    InsufficientData { usable: usize, required: usize },

    #[error("integer overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
