use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use qolab_core::harness::Bundle;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Machine-readable record of one invocation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// Input path to SHA-256 of its contents.
    pub inputs: BTreeMap<String, String>,
    pub results: Value,
    pub violations: Vec<Bundle>,
    pub seed: u64,
    pub elapsed_ms: u64,
}

/// Input files read so far, with their digests.
#[derive(Debug, Default)]
pub struct Inputs(BTreeMap<String, String>);

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.0
            .insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    pub fn into_map(self) -> BTreeMap<String, String> {
        self.0
    }
}

pub fn write_json(path: &Path, report: &RunReport) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
