//! Run manifests: what was run, with which inputs, seeds and outputs.

use std::collections::hash_map::RandomState;
use std::hash::{BuildHasher, Hasher};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::files::sha256_hex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn new(path: &Path, bytes: &[u8]) -> FileDigest {
        FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments that repeat this run exactly, including any generated seed.
    pub argv: Vec<String>,
    pub params: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub rng_seed: Option<u64>,
    pub version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, argv: Vec<String>, params: serde_json::Value, rng_seed: Option<u64>) -> Self {
        RunManifest {
            command: command.to_string(),
            argv,
            params,
            inputs: Vec::new(),
            outputs: Vec::new(),
            rng_seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

/// Returns the given seed, or draws and logs a fresh one. When drawn, the
/// seed is appended to `argv` so the manifest replays the same run.
pub fn resolve_seed(seed: Option<u64>, argv: &mut Vec<String>) -> u64 {
    match seed {
        Some(s) => s,
        None => {
            let mut h = RandomState::new().build_hasher();
            h.write_u128(
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_nanos())
                    .unwrap_or_default(),
            );
            let s = h.finish();
            log::info!("no --rng-seed given; using generated seed {s}");
            argv.push("--rng-seed".into());
            argv.push(s.to_string());
            s
        }
    }
}
