use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient dimension must be positive")]
    EmptyAmbient,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("linear form is identically zero")]
    ZeroForm,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("subspace has no proper annihilator (it is the whole space)")]
    FullSubspace,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("rainbow constraint requested but the configuration carries no colors")]
    MissingColors,

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("{field}: {message}")]
    Parse { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }
}
