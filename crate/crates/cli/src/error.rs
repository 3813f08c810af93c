use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid knot spec: {0}")]
    Spec(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Core(#[from] knotgroup::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
