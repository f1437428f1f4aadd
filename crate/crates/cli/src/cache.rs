//! On-disk cache of solutions keyed by the SHA-256 of the canonical
//! configuration JSON.

use std::path::{Path, PathBuf};

use fractal_bem_core::Solution;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::io::{read_solution_file, write_solution};

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self, CliError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(cfg: &RunConfig) -> String {
        let canonical = serde_json::to_string(cfg).expect("config serialises");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn path(&self, cfg: &RunConfig) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(cfg)))
    }

    /// A cached solution for exactly this configuration, if one is readable.
    pub fn get(&self, cfg: &RunConfig) -> Option<Solution> {
        let path = self.path(cfg);
        if !path.exists() {
            return None;
        }
        let loaded = read_solution_file(&path).and_then(|f| {
            if &f.config != cfg {
                return Err(CliError::Format {
                    path: path.display().to_string(),
                    reason: "configuration does not match its key".into(),
                });
            }
            f.into_solution(&path.display().to_string())
        });
        match loaded {
            Ok(s) => Some(s),
            Err(e) => {
                log::warn!("ignoring cache entry: {e}");
                None
            }
        }
    }

    pub fn put(&self, cfg: &RunConfig, sol: &Solution) -> Result<(), CliError> {
        write_solution(&self.path(cfg), cfg, sol)
    }
}
