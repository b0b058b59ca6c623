//! Run manifest: everything needed to repeat a run and check its outputs.

use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use serde::{Deserialize, Serialize};

use crate::output::{json_text, OutputRecord};

/// Name of the manifest inside an output directory.
pub const MANIFEST_FILE: &str = "manifest.json";

/// Version tag written into every manifest and report.
pub const ARTIFACT_VERSION: &str = concat!("wavelab ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub file: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

impl From<&OutputRecord> for OutputDigest {
    fn from(r: &OutputRecord) -> Self {
        Self {
            file: r.file.clone(),
            sha256: r.sha256.clone(),
            bytes: r.bytes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub command: String,
    /// Fully resolved configuration, every key present.
    pub config: String,
    pub inputs: Vec<InputDigest>,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub wall_seconds: f64,
    pub outputs: Vec<OutputDigest>,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> anyhow::Result<()> {
        let value = serde_json::to_value(self)?;
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join(MANIFEST_FILE);
        fs::write(&path, json_text(&value)).with_context(|| format!("writing {}", path.display()))
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Seconds since the Unix epoch.
pub fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0.0, |d| d.as_secs_f64())
}
