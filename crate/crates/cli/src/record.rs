//! Experiment records: one JSON object per line, keyed by a hash of every
//! input that determines the outcome.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct ExperimentRecord {
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus: Option<String>,
    /// Sorted by word, then by trial index.
    pub outcomes: Vec<Value>,
    pub stats: Value,
    /// Present only with `--timing`, so default records stay byte-identical.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl ExperimentRecord {
    pub fn line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn append_to(&self, path: &Path) -> std::io::Result<()> {
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        writeln!(file, "{}", self.line())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash over labelled parts; each part is length-prefixed so that
/// concatenations cannot collide.
#[derive(Default)]
pub struct ConfigHash(Sha256);

impl ConfigHash {
    pub fn new(command: &str) -> Self {
        let mut h = ConfigHash::default();
        h.part("command", command.as_bytes());
        h
    }

    pub fn part(&mut self, label: &str, bytes: &[u8]) -> &mut Self {
        for piece in [label.as_bytes(), bytes] {
            self.0.update((piece.len() as u64).to_le_bytes());
            self.0.update(piece);
        }
        self
    }

    pub fn text(&mut self, label: &str, value: impl ToString) -> &mut Self {
        self.part(label, value.to_string().as_bytes())
    }

    pub fn finish(self) -> String {
        hex(&self.0.finalize())
    }
}
