//! Run manifests: which command ran, with what resolved configuration and
//! seeds, and which artifacts it produced. Timestamps live only here, so the
//! numeric artifacts themselves stay byte-reproducible.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use serde_json::{json, Value};

pub const MANIFEST_FILE: &str = "run_manifest.json";

pub struct ManifestBuilder {
    command: &'static str,
    config: Value,
    seeds: Value,
    artifacts: Vec<PathBuf>,
    started_unix_ms: u128,
}

fn now_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

impl ManifestBuilder {
    pub fn new(command: &'static str, config: Value) -> Self {
        ManifestBuilder {
            command,
            config,
            seeds: Value::Null,
            artifacts: Vec::new(),
            started_unix_ms: now_ms(),
        }
    }

    pub fn seeds(&mut self, seeds: Value) -> &mut Self {
        self.seeds = seeds;
        self
    }

    /// Writes one artifact file and records it in the manifest.
    pub fn write_artifact(&mut self, path: &Path, contents: &str) -> anyhow::Result<()> {
        std::fs::write(path, contents)
            .with_context(|| format!("writing artifact {}", path.display()))?;
        self.artifacts.push(path.to_path_buf());
        Ok(())
    }

    /// Records an artifact written by other means (e.g. a checkpoint).
    pub fn record_artifact(&mut self, path: &Path) -> &mut Self {
        self.artifacts.push(path.to_path_buf());
        self
    }

    /// Writes `run_manifest.json` into the output directory.
    pub fn finish(self, out_dir: &Path) -> anyhow::Result<()> {
        let manifest = json!({
            "toolkit_version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.config,
            "seeds": self.seeds,
            "artifacts": self.artifacts
                .iter()
                .map(|p| p.display().to_string())
                .collect::<Vec<_>>(),
            "started_unix_ms": self.started_unix_ms as u64,
            "finished_unix_ms": now_ms() as u64,
        });
        let path = out_dir.join(MANIFEST_FILE);
        std::fs::write(&path, serde_json::to_string_pretty(&manifest)?)
            .with_context(|| format!("writing manifest {}", path.display()))?;
        Ok(())
    }
}
