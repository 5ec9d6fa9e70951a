use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid direction: {0}")]
    InvalidDirection(String),
    #[error("invalid sign pattern: {0}")]
    InvalidSignPattern(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("box holds {count} points, above the enumeration cap {cap}; use sampling")]
    CapExceeded { count: String, cap: u64 },
    #[error("box is empty")]
    EmptyBox,
    #[error("determinant is not 1: {0}")]
    DeterminantNotOne(String),
    #[error("not enough data: {0}")]
    InsufficientData(String),
    #[error("tube touches a chamber wall: {0}")]
    WallTouching(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDirection(_) => "invalid_direction",
            Error::InvalidSignPattern(_) => "invalid_sign_pattern",
            Error::InvalidPartition(_) => "invalid_partition",
            Error::InvalidEpsilon(_) => "invalid_epsilon",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::InvalidPolynomial(_) => "invalid_polynomial",
            Error::NotSquarefree => "not_squarefree",
            Error::PrecisionExhausted(_) => "precision_exhausted",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::EmptyBox => "empty_box",
            Error::DeterminantNotOne(_) => "determinant_not_one",
            Error::InsufficientData(_) => "insufficient_data",
            Error::WallTouching(_) => "wall_touching",
            Error::Parse(_) => "parse_error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
