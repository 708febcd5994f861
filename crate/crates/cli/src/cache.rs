//! Result cache keyed by the SHA-256 of a command's canonical inputs.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub document: serde_json::Value,
    pub summary: String,
    pub status: i32,
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    /// Hash of the tool version, the command's parameters and the bytes of
    /// every input file.
    pub fn key(command: &str, params: &serde_json::Value, files: &[Vec<u8>]) -> String {
        let mut h = Sha256::new();
        h.update(env!("CARGO_PKG_VERSION").as_bytes());
        h.update([0]);
        h.update(command.as_bytes());
        h.update([0]);
        h.update(params.to_string().as_bytes());
        for f in files {
            h.update((f.len() as u64).to_le_bytes());
            h.update(f);
        }
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    pub fn get(&self, key: &str) -> Option<Entry> {
        let text = fs::read_to_string(self.path(key)?).ok()?;
        // A corrupt entry is a miss.
        serde_json::from_str(&text).ok()
    }

    pub fn put(&self, key: &str, entry: &Entry) -> std::io::Result<()> {
        let Some(path) = self.path(key) else {
            return Ok(());
        };
        fs::create_dir_all(path.parent().unwrap_or(Path::new(".")))?;
        // Write then rename so readers never see a partial file.
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_vec(entry)?)?;
        fs::rename(tmp, path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_depends_on_every_input() {
        let p = serde_json::json!({"m": 7});
        let a = Cache::key("pattern", &p, &[]);
        assert_eq!(a, Cache::key("pattern", &p, &[]));
        assert_ne!(a, Cache::key("formulas", &p, &[]));
        assert_ne!(a, Cache::key("pattern", &serde_json::json!({"m": 5}), &[]));
        assert_ne!(a, Cache::key("pattern", &p, &[b"x".to_vec()]));
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(Some(dir.path().to_path_buf()));
        let e = Entry {
            document: serde_json::json!([1, 2]),
            summary: "s".into(),
            status: 0,
        };
        assert!(c.get("k").is_none());
        c.put("k", &e).unwrap();
        assert_eq!(c.get("k"), Some(e));
        assert!(Cache::new(None).get("k").is_none());
    }
}
