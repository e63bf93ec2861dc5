//! On-disk payload cache keyed by a hash of the version, command and
//! canonical inputs. Entries are guarded by advisory file locks so that
//! concurrent invocations never observe a half-written file.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::PathBuf;

use serde_json::Value;
use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "FORMSTR_CACHE_DIR";

/// `$FORMSTR_CACHE_DIR`, else `$XDG_CACHE_HOME/formstr`, else
/// `$HOME/.cache/formstr`, else a directory under the system temp dir.
pub fn cache_dir() -> PathBuf {
    if let Some(d) = std::env::var_os(ENV_VAR).filter(|d| !d.is_empty()) {
        return PathBuf::from(d);
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME").filter(|d| !d.is_empty()) {
        return PathBuf::from(d).join("formstr");
    }
    if let Some(h) = std::env::var_os("HOME").filter(|d| !d.is_empty()) {
        return PathBuf::from(h).join(".cache").join("formstr");
    }
    std::env::temp_dir().join("formstr-cache")
}

pub fn key(version: &str, command: &str, inputs: &Value) -> String {
    let mut h = Sha256::new();
    h.update(version.as_bytes());
    h.update([0]);
    h.update(command.as_bytes());
    h.update([0]);
    h.update(inputs.to_string().as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Cache {
        Cache { dir }
    }

    fn lock_file(&self, key: &str) -> std::io::Result<File> {
        fs::create_dir_all(&self.dir)?;
        OpenOptions::new().create(true).truncate(false).write(true).open(self.dir.join(format!("{key}.lock")))
    }

    pub fn get(&self, key: &str) -> Option<Value> {
        let path = self.dir.join(format!("{key}.json"));
        if !path.exists() {
            return None;
        }
        let lock = self.lock_file(key).ok()?;
        lock.lock_shared().ok()?;
        let text = fs::read_to_string(&path).ok();
        let _ = lock.unlock();
        serde_json::from_str(&text?).ok()
    }

    /// Best effort: a cache that cannot be written is skipped.
    pub fn put(&self, key: &str, payload: &Value) {
        let _ = self.try_put(key, payload);
    }

    fn try_put(&self, key: &str, payload: &Value) -> std::io::Result<()> {
        let lock = self.lock_file(key)?;
        lock.lock()?;
        let tmp = self.dir.join(format!("{key}.json.{}.tmp", std::process::id()));
        let result = (|| {
            let mut f = File::create(&tmp)?;
            f.write_all(payload.to_string().as_bytes())?;
            f.sync_all()?;
            fs::rename(&tmp, self.dir.join(format!("{key}.json")))
        })();
        if result.is_err() {
            let _ = fs::remove_file(&tmp);
        }
        let _ = lock.unlock();
        result
    }
}
