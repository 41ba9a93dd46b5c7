//! A content-addressed result cache.
//!
//! Each entry lives in `<sha256(key)>.json` and records the key, the
//! serialised result and a SHA-256 digest over both. An entry whose key or
//! digest does not match is treated as a miss and overwritten. Writes go to
//! a temporary file in the cache directory that is then renamed into place,
//! so readers never observe a partial entry.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Environment variable naming the cache directory.
pub const ENV_VAR: &str = "KLRLAB_CACHE";

/// A cached command result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub key: String,
    /// The check passed.
    pub ok: bool,
    /// Every computed quantity has exact status.
    pub exact: bool,
    /// The emitted JSON document, byte for byte.
    pub payload: String,
    pub digest: String,
}

impl Entry {
    pub fn new(key: String, ok: bool, exact: bool, payload: String) -> Self {
        let digest = entry_digest(&key, ok, exact, &payload);
        Self {
            key,
            ok,
            exact,
            payload,
            digest,
        }
    }

    fn is_intact(&self) -> bool {
        self.digest == entry_digest(&self.key, self.ok, self.exact, &self.payload)
    }
}

fn hex_sha256(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

fn entry_digest(key: &str, ok: bool, exact: bool, payload: &str) -> String {
    hex_sha256(format!("{key}\n{ok}\n{exact}\n{payload}").as_bytes())
}

/// What a lookup found.
#[derive(Debug)]
pub enum Lookup {
    Hit(Entry),
    Miss,
    /// An entry exists but fails its integrity check.
    Corrupt,
}

/// A cache rooted at one directory.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// The cache directory by precedence: the explicit flag, then
    /// `KLRLAB_CACHE`, then the per-user cache directory.
    pub fn locate(flag: Option<&Path>) -> Option<Self> {
        let dir = flag
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()).map(PathBuf::from))
            .or_else(|| dirs::cache_dir().map(|d| d.join("klrlab")))?;
        Some(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// The file holding the entry for `key`.
    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", hex_sha256(key.as_bytes())))
    }

    pub fn get(&self, key: &str) -> Lookup {
        let Ok(text) = fs::read_to_string(self.path_for(key)) else {
            return Lookup::Miss;
        };
        match serde_json::from_str::<Entry>(&text) {
            Ok(e) if e.key == key && e.is_intact() => Lookup::Hit(e),
            _ => Lookup::Corrupt,
        }
    }

    /// Stores `entry` atomically.
    pub fn put(&self, entry: &Entry) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        let text = serde_json::to_string(entry).map_err(std::io::Error::other)?;
        tmp.write_all(text.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path_for(&entry.key)).map_err(|e| e.error)?;
        Ok(())
    }
}
