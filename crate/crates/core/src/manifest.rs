//! Run manifests: enough provenance to reproduce any command bit-exactly.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::ForagerConfig;
use crate::error::{Error, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    /// Raw command-line arguments as invoked.
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub scenario_path: Option<PathBuf>,
    pub scenario_sha256: Option<String>,
    pub config_path: Option<PathBuf>,
    /// Fully resolved configuration used for the run.
    pub config: Option<ForagerConfig>,
    pub output_dir: Option<PathBuf>,
    /// Artifacts written by the command.
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            args: std::env::args().skip(1).collect(),
            seed: None,
            scenario_path: None,
            scenario_sha256: None,
            config_path: None,
            config: None,
            output_dir: None,
            outputs: Vec::new(),
        }
    }

    pub fn with_scenario(mut self, path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        self.scenario_path = Some(path.to_path_buf());
        self.scenario_sha256 = Some(hex_digest(&bytes));
        Ok(self)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self).expect("manifest serialization");
        std::fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Format {
            path: path.display().to_string(),
            detail: e.to_string(),
        })
    }
}

pub fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}
