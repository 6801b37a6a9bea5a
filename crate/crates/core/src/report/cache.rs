//! Append-only cache of definitive prefix-proof outcomes.
//!
//! One JSON object per line:
//!
//! ```json
//! {"version":"radiolab/0.1.0","key":{...},"outcome":{...}}
//! ```
//!
//! Lines written by another version, or that fail to parse, are ignored.
//! Budget-exhausted outcomes are never stored.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::search::{ProofKey, ProofOutcome, ProofStore};

pub const CACHE_ENV: &str = "RADIOLAB_CACHE_DIR";
pub const CACHE_FILE: &str = "proofs.jsonl";
pub const CACHE_VERSION: &str = concat!("radiolab/", env!("CARGO_PKG_VERSION"));

#[derive(Serialize, Deserialize)]
struct Line {
    version: String,
    key: ProofKey,
    outcome: ProofOutcome,
}

pub struct ProofCache {
    path: PathBuf,
    entries: Mutex<HashMap<ProofKey, ProofOutcome>>,
    file: Mutex<File>,
}

impl ProofCache {
    /// `$RADIOLAB_CACHE_DIR`, or `.radiolab-cache` in the working directory.
    pub fn default_dir() -> PathBuf {
        std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(".radiolab-cache"))
    }

    pub fn open(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(CACHE_FILE);
        let mut entries = HashMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(&path)?).lines() {
                let Ok(line) = serde_json::from_str::<Line>(&line?) else { continue };
                if line.version == CACHE_VERSION {
                    entries.insert(line.key, line.outcome);
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(Self { path, entries: Mutex::new(entries), file: Mutex::new(file) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl ProofStore for ProofCache {
    fn lookup(&self, key: &ProofKey) -> Option<ProofOutcome> {
        self.entries.lock().unwrap().get(key).cloned()
    }

    fn record(&self, key: &ProofKey, outcome: &ProofOutcome) {
        let line = Line { version: CACHE_VERSION.into(), key: key.clone(), outcome: outcome.clone() };
        let Ok(text) = serde_json::to_string(&line) else { return };
        let mut entries = self.entries.lock().unwrap();
        if entries.insert(key.clone(), outcome.clone()).is_none() {
            // a failed append only costs a recomputation on the next run
            let _ = writeln!(self.file.lock().unwrap(), "{text}");
        }
    }
}
