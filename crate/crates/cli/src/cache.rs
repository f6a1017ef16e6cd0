//! Content-addressed on-disk cache.
//!
//! An entry lives at `<dir>/<key>.json`, where `key = sha256(kind, canonical inputs,
//! engine version)`. The file records its key and a checksum of the payload. Reads
//! recompute both; a mismatch is a revalidation failure, never silently used.
//! Writes go through a temporary file in the same directory followed by a rename.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use hallforge_core::ENGINE_VERSION;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::JobConfig;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub kind: String,
    pub checksum: String,
    pub payload: String,
}

fn sha256_hex(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

/// Key for a payload of `kind` derived from the job's canonical inputs plus `extra`.
pub fn cache_key(config: &JobConfig, kind: &str, extra: &str) -> String {
    let bound: Vec<String> = config.bound.0.iter().map(u32::to_string).collect();
    sha256_hex(&[
        kind,
        &config.quiver.render(),
        &config.q().to_string(),
        &bound.join(","),
        extra,
        ENGINE_VERSION,
    ])
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

/// Outcome of a lookup.
#[derive(Debug)]
pub enum Lookup {
    Hit(String),
    Miss,
    /// Present but failed revalidation; carries the reason.
    Corrupt(PathBuf, String),
}

impl Cache {
    pub fn open(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(|e| CliError::Cache {
            path: dir.to_path_buf(),
            source: e,
        })?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str, kind: &str) -> Lookup {
        let path = self.path_for(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Lookup::Miss,
            Err(e) => return Lookup::Corrupt(path, e.to_string()),
        };
        let entry: CacheEntry = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(e) => return Lookup::Corrupt(path, format!("unreadable entry: {e}")),
        };
        if entry.key != key || entry.kind != kind {
            return Lookup::Corrupt(path, "key does not match its inputs".into());
        }
        if sha256_hex(&[&entry.payload]) != entry.checksum {
            return Lookup::Corrupt(path, "payload checksum mismatch".into());
        }
        Lookup::Hit(entry.payload)
    }

    pub fn put(&self, key: &str, kind: &str, payload: &str) -> CliResult<()> {
        let entry = CacheEntry {
            key: key.to_string(),
            kind: kind.to_string(),
            checksum: sha256_hex(&[payload]),
            payload: payload.to_string(),
        };
        let io = |e: std::io::Error| CliError::Cache {
            path: self.dir.clone(),
            source: e,
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io)?;
        let text = serde_json::to_string(&entry).expect("entry serializes");
        tmp.write_all(text.as_bytes()).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(self.path_for(key)).map_err(|e| io(e.error))?;
        Ok(())
    }
}
