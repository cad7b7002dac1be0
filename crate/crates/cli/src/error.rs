use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read config {path}: {source}")]
    ReadConfig {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("config {path} is not valid: {message}")]
    ParseConfig { path: PathBuf, message: String },

    #[error("cannot write {path}: {source} (check the directory exists and is writable)")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot read table {path}: {message}")]
    ReadTable { path: PathBuf, message: String },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Core(#[from] qotto_core::error::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
