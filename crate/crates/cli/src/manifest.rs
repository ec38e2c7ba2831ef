use std::path::PathBuf;
use std::process::Command;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

/// One per run. Written next to the outputs, or to stderr when there is no
/// output directory.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// SHA-256 of the config bytes, or of the argv when no config was read.
    pub config_digest: String,
    pub seed: Option<u64>,
    /// Seconds since the epoch; `SOURCE_DATE_EPOCH` wins when set.
    pub timestamp: u64,
    pub tool_version: String,
    pub git_hash: Option<String>,
    pub workers: Option<usize>,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(subcommand: &str, digest_input: &[u8], seed: Option<u64>, workers: Option<usize>) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            config_digest: format!("{:x}", Sha256::digest(digest_input)),
            seed,
            timestamp: timestamp(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            git_hash: git_hash(),
            workers,
            outputs: Vec::new(),
        }
    }
}

fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()))
}

fn git_hash() -> Option<String> {
    let out = Command::new("git").args(["rev-parse", "HEAD"]).output().ok()?;
    out.status.success().then(|| String::from_utf8_lossy(&out.stdout).trim().to_string())
}
