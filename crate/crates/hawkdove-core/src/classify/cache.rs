//! Append-only JSON Lines response cache.
//!
//! One record per classified prompt, keyed by
//! `sha256(prompt || 0x00 || model_id || 0x00 || params_json)`, so any change
//! to the unit text, few-shot set, model, or sampling parameters invalidates
//! the entry automatically.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::label::Label;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: String,
    pub prompt_sha256: String,
    pub model_id: String,
    pub params: serde_json::Value,
    pub raw_response: String,
    pub label: Label,
    /// RFC 3339 write time. Informational only; never used for lookups.
    pub timestamp: String,
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("failed to open cache {path}: {source}")]
    Open {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("failed to append to cache {path}: {source}")]
    Append {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

/// Concurrent-reader, serialized-writer cache over one JSONL file.
pub struct Cache {
    path: PathBuf,
    index: RwLock<HashMap<String, CacheRecord>>,
    file: Mutex<File>,
}

impl Cache {
    /// Opens (creating if absent) the cache file and loads every record.
    /// Unparseable lines are skipped with a warning so a truncated tail from
    /// an interrupted run does not brick the cache.
    pub fn open(path: &Path) -> Result<Cache, CacheError> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent).map_err(|source| CacheError::Open {
                    path: path.to_path_buf(),
                    source,
                })?;
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .read(true)
            .open(path)
            .map_err(|source| CacheError::Open {
                path: path.to_path_buf(),
                source,
            })?;

        let mut index = HashMap::new();
        let reader = BufReader::new(&file);
        for (line_no, line) in reader.lines().enumerate() {
            let line = line.map_err(|source| CacheError::Open {
                path: path.to_path_buf(),
                source,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheRecord>(&line) {
                Ok(record) => {
                    index.insert(record.key.clone(), record);
                }
                Err(err) => {
                    log::warn!(
                        "skipping unparseable cache line {} in {}: {err}",
                        line_no + 1,
                        path.display()
                    );
                }
            }
        }

        Ok(Cache {
            path: path.to_path_buf(),
            index: RwLock::new(index),
            file: Mutex::new(file),
        })
    }

    pub fn get(&self, key: &str) -> Option<CacheRecord> {
        self.index.read().expect("cache lock").get(key).cloned()
    }

    pub fn put(&self, record: CacheRecord) -> Result<(), CacheError> {
        let line = serde_json::to_string(&record).expect("cache record serializes");
        {
            let mut file = self.file.lock().expect("cache file lock");
            writeln!(file, "{line}").map_err(|source| CacheError::Append {
                path: self.path.clone(),
                source,
            })?;
        }
        self.index
            .write()
            .expect("cache lock")
            .insert(record.key.clone(), record);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.index.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

/// Cache key: hex sha256 over prompt, model id, and canonical params JSON,
/// NUL-separated so field boundaries cannot collide.
pub fn cache_key(prompt: &str, model_id: &str, params: &serde_json::Value) -> String {
    let mut hasher = Sha256::new();
    hasher.update(prompt.as_bytes());
    hasher.update([0u8]);
    hasher.update(model_id.as_bytes());
    hasher.update([0u8]);
    hasher.update(
        serde_json::to_string(params)
            .expect("params serialize")
            .as_bytes(),
    );
    hex(&hasher.finalize())
}

pub fn sha256_hex(data: &str) -> String {
    hex(&Sha256::digest(data.as_bytes()))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
