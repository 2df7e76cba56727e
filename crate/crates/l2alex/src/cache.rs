//! Content-addressed result cache, stored as newline-delimited JSON.
//!
//! Keys are SHA-256 digests of the canonical link serialization, so
//! construction-level duplicates share entries. The cache is best-effort:
//! lookups skip corrupt lines with a warning and IO failures never abort a
//! computation. Stores are append-only and idempotent, which also makes
//! concurrent appenders harmless (duplicate entries are identical).

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dispatch::DerivationTrace;
use crate::dsl::canonical_source;
use crate::link::LinkSpec;
use crate::torsion::TorsionClass;

/// Environment variable overriding the default cache path.
pub const CACHE_ENV_VAR: &str = "L2ALEX_CACHE";

/// One cached computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    /// SHA-256 of the canonical link serialization.
    pub key: String,
    /// The computed torsion class with its canonical exponent.
    pub torsion: TorsionClass,
    /// SHA-256 of the rendered derivation trace.
    pub trace_digest: String,
}

/// Cache key of a link construction.
pub fn cache_key(spec: &LinkSpec) -> String {
    hex_digest(canonical_source(spec).as_bytes())
}

/// Digest of a derivation trace.
pub fn trace_digest(trace: &DerivationTrace) -> String {
    hex_digest(trace.render().as_bytes())
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// A JSON-lines cache file.
#[derive(Debug, Clone)]
pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn at(path: impl Into<PathBuf>) -> Self {
        Cache { path: path.into() }
    }

    /// `L2ALEX_CACHE` if set, otherwise `l2alex-cache.jsonl` in the working directory.
    pub fn default_path() -> PathBuf {
        std::env::var_os(CACHE_ENV_VAR)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("l2alex-cache.jsonl"))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Returns the stored entry for `key`, plus warnings for skipped lines.
    pub fn lookup(&self, key: &str) -> (Option<CacheEntry>, Vec<String>) {
        let mut warnings = Vec::new();
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return (None, warnings),
            Err(e) => {
                warnings.push(format!("cache unreadable ({e}); continuing without it"));
                return (None, warnings);
            }
        };
        let reader = BufReader::new(file);
        let mut hit = None;
        for (lineno, line) in reader.lines().enumerate() {
            let line = match line {
                Ok(l) => l,
                Err(e) => {
                    warnings.push(format!("cache read stopped at line {}: {e}", lineno + 1));
                    break;
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheEntry>(&line) {
                Ok(entry) => {
                    if hit.is_none() && entry.key == key {
                        hit = Some(entry);
                    }
                }
                Err(e) => {
                    warnings.push(format!("cache line {} skipped: {e}", lineno + 1));
                }
            }
        }
        (hit, warnings)
    }

    /// Appends the entry unless its key is already present. Returns whether a
    /// new line was written.
    pub fn store(&self, entry: &CacheEntry) -> std::io::Result<bool> {
        let (existing, _) = self.lookup(&entry.key);
        if existing.is_some() {
            return Ok(false);
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        let mut line = serde_json::to_string(entry).expect("cache entries serialize");
        line.push('\n');
        file.write_all(line.as_bytes())?;
        Ok(true)
    }
}
