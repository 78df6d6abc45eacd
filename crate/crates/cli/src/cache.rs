//! On-disk result cache. One JSON file per key, written to a temporary name
//! and renamed into place, so readers never see a partial entry. Any I/O
//! problem turns the cache off for the rest of the run.

use std::fs;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub fn code_version() -> String {
    std::env::var("FRAISSE_CODE_VERSION").unwrap_or_else(|_| concat!(env!("CARGO_PKG_VERSION"), "/1").to_string())
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    code_version: String,
    digest: String,
    value: Value,
}

fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(v.to_string().as_bytes()))
}

pub struct Cache {
    dir: Option<PathBuf>,
    pub log: Vec<String>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        let dir = dir.and_then(|d| match fs::create_dir_all(&d) {
            Ok(()) => Some(d),
            Err(e) => {
                eprintln!("warning: cache disabled: {}: {e}", d.display());
                None
            }
        });
        Cache { dir, log: Vec::new() }
    }

    /// Hash of the operation, its canonical inputs and the code version.
    pub fn key(op: &str, inputs: &Value) -> String {
        let v = serde_json::json!({ "op": op, "inputs": inputs, "code": code_version() });
        hex::encode(Sha256::digest(v.to_string().as_bytes()))
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    fn evict(&mut self, path: &PathBuf, why: &str) {
        self.log.push(format!("cache: evicted {} ({why})", path.display()));
        let _ = fs::remove_file(path);
    }

    /// A stored value that parses and passes `verify`; anything else is
    /// evicted and reported as a miss.
    pub fn get<T: DeserializeOwned>(&mut self, key: &str, verify: &dyn Fn(&T) -> bool) -> Option<T> {
        let path = self.path(key)?;
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(_) => {
                self.log.push("cache: miss".into());
                return None;
            }
        };
        let entry: Entry = match serde_json::from_str(&text) {
            Ok(e) => e,
            Err(_) => {
                self.evict(&path, "unreadable");
                return None;
            }
        };
        if entry.key != key || entry.code_version != code_version() {
            self.log.push("cache: miss (stale entry ignored)".into());
            return None;
        }
        if digest(&entry.value) != entry.digest {
            self.evict(&path, "digest mismatch");
            return None;
        }
        let value: T = match serde_json::from_value(entry.value) {
            Ok(v) => v,
            Err(_) => {
                self.evict(&path, "unreadable value");
                return None;
            }
        };
        if !verify(&value) {
            self.evict(&path, "certificate failed re-verification");
            return None;
        }
        self.log.push("cache: hit, certificate re-verified".into());
        Some(value)
    }

    pub fn put<T: Serialize>(&mut self, key: &str, value: &T) {
        let Some(path) = self.path(key) else { return };
        let value = serde_json::to_value(value).expect("cached values serialize");
        let entry = Entry { key: key.into(), code_version: code_version(), digest: digest(&value), value };
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let res = fs::write(&tmp, serde_json::to_string(&entry).expect("entries serialize")).and_then(|_| fs::rename(&tmp, &path));
        match res {
            Ok(()) => self.log.push("cache: stored".into()),
            Err(e) => {
                let _ = fs::remove_file(&tmp);
                eprintln!("warning: cache disabled: {}: {e}", path.display());
                self.dir = None;
            }
        }
    }
}
