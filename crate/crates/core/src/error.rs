use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("SingularMatrix: matrix is not invertible")]
    SingularMatrix,

    #[error("DivisionByZero: inverse of zero")]
    DivisionByZero,

    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),

    #[error("ConfigMismatch: {0}")]
    ConfigMismatch(String),

    #[error("NotPrime: {0} is not prime")]
    NotPrime(u64),

    #[error("NotAVertex: {0}")]
    NotAVertex(String),

    #[error("CapExceeded: {0}")]
    CapExceeded(String),

    #[error("ConstantDirection: direction vector is constant (a homothety shift)")]
    ConstantDirection,

    #[error("IndexOutOfRange: {0}")]
    IndexOutOfRange(String),

    #[error("InvalidInput: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable error class name, used by the CLI error reporting.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SingularMatrix => "SingularMatrix",
            Error::DivisionByZero => "DivisionByZero",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::ConfigMismatch(_) => "ConfigMismatch",
            Error::NotPrime(_) => "NotPrime",
            Error::NotAVertex(_) => "NotAVertex",
            Error::CapExceeded(_) => "CapExceeded",
            Error::ConstantDirection => "ConstantDirection",
            Error::IndexOutOfRange(_) => "IndexOutOfRange",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
