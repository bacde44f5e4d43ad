//! Benchmark instance metadata.
//!
//! The manifest is a comma-separated file with the header
//! `name,n,chi,nbh_size`. Blank lines and lines starting with `#` are
//! ignored. `nbh_size` is redundant (`n * (chi - 1)`) and is checked on load
//! so that transcription errors surface immediately.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub name: String,
    pub n: usize,
    /// Best-known chromatic number, used as `k` for the χ-GCP.
    pub chi: usize,
    pub nbh_size: usize,
}

impl InstanceMeta {
    pub fn new(name: impl Into<String>, n: usize, chi: usize) -> Result<Self, ManifestError> {
        let name = name.into();
        if chi < 2 {
            return Err(ManifestError::DegenerateChi { name, chi });
        }
        Ok(Self {
            name,
            n,
            chi,
            nbh_size: n * (chi - 1),
        })
    }
}

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read manifest: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: expected 4 fields `name,n,chi,nbh_size`")]
    FieldCount { line: usize },
    #[error("line {line}: invalid integer `{token}`")]
    NotAnInteger { line: usize, token: String },
    #[error("instance {name}: chi = {chi}, must be at least 2")]
    DegenerateChi { name: String, chi: usize },
    #[error("instance {name}: nbh_size {stored} != n * (chi - 1) = {expected}")]
    InconsistentNeighborhood {
        name: String,
        stored: usize,
        expected: usize,
    },
}

pub fn parse_manifest(text: &str) -> Result<Vec<InstanceMeta>, ManifestError> {
    let mut entries = Vec::new();
    let mut header_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(ManifestError::FieldCount { line });
        }
        if !header_seen {
            header_seen = true;
            if fields[0] == "name" {
                continue;
            }
        }
        let int = |token: &str| {
            token
                .parse::<usize>()
                .map_err(|_| ManifestError::NotAnInteger {
                    line,
                    token: token.to_string(),
                })
        };
        let meta = InstanceMeta::new(fields[0], int(fields[1])?, int(fields[2])?)?;
        let stored = int(fields[3])?;
        if stored != meta.nbh_size {
            return Err(ManifestError::InconsistentNeighborhood {
                name: meta.name,
                stored,
                expected: meta.nbh_size,
            });
        }
        entries.push(meta);
    }
    Ok(entries)
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<InstanceMeta>, ManifestError> {
    parse_manifest(&std::fs::read_to_string(path)?)
}

/// Normalizes instance names so that `DSJC250.5.col`, `dsjc250.5` and
/// `le_450_25c` / `le450_25c` compare equal.
pub fn normalize_name(name: &str) -> String {
    let lower = name.to_ascii_lowercase();
    let stem = lower.strip_suffix(".col").unwrap_or(&lower);
    stem.replace("le_450", "le450")
        .replace("flat_300", "flat300")
}

pub fn find<'a>(entries: &'a [InstanceMeta], name: &str) -> Option<&'a InstanceMeta> {
    let key = normalize_name(name);
    entries.iter().find(|e| normalize_name(&e.name) == key)
}
