//! Run manifests and atomic file output.

use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Record of one file-producing invocation: the command, its full resolved
/// parameter set, the seed (when randomness is involved), the tool version,
/// every file written, and the wall time.
#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub outputs: Vec<String>,
    pub wall_time_seconds: f64,
    #[serde(skip)]
    started: Instant,
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value, seed: Option<u64>) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: Vec::new(),
            wall_time_seconds: 0.0,
            started: Instant::now(),
        }
    }

    pub fn record(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    /// Write the manifest itself (atomically), closing the wall-time clock.
    pub fn write(mut self, path: &Path) -> anyhow::Result<()> {
        self.wall_time_seconds = self.started.elapsed().as_secs_f64();
        let mut bytes = serde_json::to_vec_pretty(&self)?;
        bytes.push(b'\n');
        atomic_write(path, &bytes)
    }
}

/// Default manifest location: first output path with its extension replaced
/// by `manifest.json`.
pub fn manifest_path_for(first_output: &Path) -> PathBuf {
    first_output.with_extension("manifest.json")
}

/// Write via a temporary file in the same directory plus rename, so readers
/// never observe a partial file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| anyhow::anyhow!("output path {} has no file name", path.display()))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, bytes)
        .map_err(|e| anyhow::anyhow!("writing {}: {e}", tmp.display()))?;
    fs::rename(&tmp, path)
        .map_err(|e| anyhow::anyhow!("renaming into {}: {e}", path.display()))?;
    Ok(())
}
