use std::path::PathBuf;

/// Errors raised while loading or running scenarios.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {error}")]
    Read { path: PathBuf, error: std::io::Error },

    #[error("cannot write {path}: {error}")]
    Write { path: PathBuf, error: std::io::Error },

    #[error("scenario schema error: {0}")]
    Schema(String),

    #[error("filtration `{name}`: {error}")]
    Filtration { name: String, error: emult::Error },

    #[error("task `{task}`: {error}")]
    Task { task: String, error: emult::Error },

    #[error("task `{task}`: {detail}")]
    Parameter { task: String, detail: String },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),

    #[error("json output: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
