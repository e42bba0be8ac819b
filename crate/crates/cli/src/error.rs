use std::path::PathBuf;

use isg::config::ConfigError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Sim(#[from] isg::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn field(field: &str, reason: impl Into<String>) -> Self {
        Self::Config(ConfigError::Field {
            field: field.to_string(),
            reason: reason.into(),
        })
    }

    /// 2 for bad input, 1 for numerical or I/O failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::Sim(e) if e.is_numerical() => 1,
            Self::Sim(_) => 2,
            Self::Write { .. } | Self::Failed(_) => 1,
        }
    }
}
