use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read `{path}`: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write `{path}`: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Dsl(#[from] sysdsl::DslError),
    #[error(transparent)]
    Painleve(#[from] painleve::PainleveError),
    #[error(transparent)]
    Lax(#[from] laxflow::LaxError),
    #[error(transparent)]
    Jacobi(#[from] jacobispec::JacobiError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}
