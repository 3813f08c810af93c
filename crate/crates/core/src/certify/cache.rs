//! On-disk certificate cache, content-addressed by presentation hash,
//! operation and budget class.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::budget::Budget;
use super::certificate::Certificate;
use crate::error::Result;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "KNOTGROUP_CACHE_DIR";

/// One cached operation result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub operation: String,
    pub presentation_hash: String,
    pub budget_class: String,
    pub created_unix: u64,
    pub certificates: Vec<Certificate>,
    /// Operation-specific result document.
    pub result: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CacheListing {
    pub key: String,
    pub operation: String,
    pub presentation_hash: String,
    pub budget_class: String,
    pub certificates: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheCheck {
    pub checked: usize,
    /// Files that failed to parse or whose certificates failed replay.
    pub failures: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct CertificateCache {
    dir: PathBuf,
}

impl CertificateCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(CertificateCache { dir })
    }

    /// `explicit`, else the environment variable, else the user cache directory.
    pub fn locate(explicit: Option<&Path>) -> Result<Self> {
        if let Some(d) = explicit {
            return Self::open(d);
        }
        if let Some(d) = std::env::var_os(CACHE_ENV).filter(|d| !d.is_empty()) {
            return Self::open(PathBuf::from(d));
        }
        let base = std::env::var_os("XDG_CACHE_HOME")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
            .unwrap_or_else(std::env::temp_dir);
        Self::open(base.join("knotgroup"))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(operation: &str, presentation_hash: &str, budget: &Budget) -> String {
        let text = format!("{operation}\n{presentation_hash}\n{}", budget.class());
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(
        &self,
        operation: &str,
        presentation_hash: &str,
        budget: &Budget,
    ) -> Result<Option<CacheEntry>> {
        let path = self.path(&Self::key(operation, presentation_hash, budget));
        match fs::read_to_string(&path) {
            Ok(text) => {
                let entry: CacheEntry = serde_json::from_str(&text)?;
                let matches = entry.operation == operation
                    && entry.presentation_hash == presentation_hash
                    && entry.budget_class == budget.class();
                Ok(matches.then_some(entry))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn put(
        &self,
        operation: &str,
        presentation_hash: &str,
        budget: &Budget,
        certificates: Vec<Certificate>,
        result: serde_json::Value,
    ) -> Result<CacheEntry> {
        let entry = CacheEntry {
            operation: operation.to_string(),
            presentation_hash: presentation_hash.to_string(),
            budget_class: budget.class(),
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            certificates,
            result,
        };
        let key = Self::key(operation, presentation_hash, budget);
        let tmp = self.dir.join(format!(".{key}.tmp"));
        fs::write(&tmp, serde_json::to_string_pretty(&entry)?)?;
        fs::rename(&tmp, self.path(&key))?;
        Ok(entry)
    }

    fn files(&self) -> Result<Vec<PathBuf>> {
        let mut out: Vec<PathBuf> = fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        out.sort();
        Ok(out)
    }

    fn read(path: &Path) -> Result<CacheEntry> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    fn key_of(path: &Path) -> String {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    }

    /// Entries in key order; unreadable files are reported as errors.
    pub fn list(&self) -> Result<Vec<std::result::Result<CacheListing, (String, String)>>> {
        Ok(self
            .files()?
            .into_iter()
            .map(|path| {
                let key = Self::key_of(&path);
                match Self::read(&path) {
                    Ok(e) => Ok(CacheListing {
                        key,
                        operation: e.operation,
                        presentation_hash: e.presentation_hash,
                        budget_class: e.budget_class,
                        certificates: e.certificates.len(),
                    }),
                    Err(err) => Err((key, err.to_string())),
                }
            })
            .collect())
    }

    /// Removes entries last modified at least `max_age` ago; returns how many.
    pub fn gc(&self, max_age: Duration) -> Result<usize> {
        let now = SystemTime::now();
        let mut removed = 0;
        for path in self.files()? {
            let modified = fs::metadata(&path)?.modified()?;
            if now.duration_since(modified).unwrap_or(Duration::ZERO) >= max_age {
                fs::remove_file(&path)?;
                removed += 1;
            }
        }
        Ok(removed)
    }

    /// Replays every stored certificate.
    pub fn verify(&self) -> Result<CacheCheck> {
        let mut check = CacheCheck::default();
        for path in self.files()? {
            let key = Self::key_of(&path);
            let entry = match Self::read(&path) {
                Ok(e) => e,
                Err(err) => {
                    check.failures.push((key, err.to_string()));
                    continue;
                }
            };
            for cert in &entry.certificates {
                check.checked += 1;
                if let Err(err) = cert.verify() {
                    check.failures.push((key.clone(), err.to_string()));
                }
            }
        }
        Ok(check)
    }
}
