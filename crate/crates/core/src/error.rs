use thiserror::Error;

/// Errors produced by the Mapper pipeline and its verification tools.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    /// A cover could not be built, or one of its elements is empty or has zero length.
    #[error("degenerate cover: {0}")]
    DegenerateCover(String),

    /// A derived cover violates the gomic conditions.
    #[error("non-regular cover: {0}")]
    NonRegularCover(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid_param(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
