use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Everything needed to reproduce a run: the canonical argument list
/// (output directory and manifest flags stripped, stamp pinned).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub args: Vec<String>,
    pub seed: u64,
    pub workers: usize,
    pub stamp: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub config: RunConfig,
    /// SHA-256 of the argument list, excluding the worker count.
    pub config_hash: String,
    pub version: String,
    pub outputs: Vec<String>,
    pub summary: serde_json::Value,
}

pub fn version() -> String {
    format!("v{}", env!("CARGO_PKG_VERSION"))
}

/// Drops flags that must not be replayed and pins the stamp.
pub fn canonical_args(raw: &[String], stamp: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = raw.iter();
    while let Some(a) = it.next() {
        let (flag, inline) = match a.split_once('=') {
            Some((f, _)) if f.starts_with("--") => (f, true),
            _ => (a.as_str(), false),
        };
        if matches!(flag, "--out" | "--from-manifest" | "--stamp") {
            if !inline {
                it.next();
            }
            continue;
        }
        out.push(a.clone());
    }
    out.push("--stamp".into());
    out.push(stamp.into());
    out
}

pub fn config_hash(cfg: &RunConfig) -> String {
    let mut h = Sha256::new();
    for a in &cfg.args {
        h.update(a.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

pub fn read(path: &Path) -> Result<Manifest, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("bad manifest {}: {e}", path.display()))
}
