use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Directory for artifacts when `--out` is not given.
pub const OUT_DIR_VAR: &str = "ISG_OUT_DIR";

#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Stdout,
    File(PathBuf),
}

impl Target {
    /// `--out` wins, then the config's `output`, then `$ISG_OUT_DIR/<name>`,
    /// then `./<name>`.
    pub fn resolve(out: Option<&Path>, config: Option<&Path>, name: &str) -> Self {
        match out.or(config) {
            Some(p) if p == Path::new("-") => Self::Stdout,
            Some(p) => Self::File(p.to_path_buf()),
            None => Self::File(default_dir().join(name)),
        }
    }
}

pub fn default_dir() -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(d) if !d.is_empty() => PathBuf::from(d),
        _ => PathBuf::from("."),
    }
}

pub fn write_to(target: &Target, body: &str) -> Result<(), CliError> {
    match target {
        Target::Stdout => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Write {
                    path: PathBuf::from("-"),
                    source,
                })
        }
        Target::File(path) => {
            let io = |source| CliError::Write {
                path: path.clone(),
                source,
            };
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(io)?;
            }
            std::fs::write(path, body).map_err(io)
        }
    }
}
