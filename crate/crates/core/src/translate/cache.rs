use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::TranslateError;

pub const CACHE_FILE: &str = "translations.cache.json";

pub fn cache_key(source: &str, target: &str, text: &str) -> String {
    let mut h = Sha256::new();
    h.update(source.as_bytes());
    h.update(target.as_bytes());
    h.update(text.as_bytes());
    hex::encode(h.finalize())
}

/// Translations keyed by [`cache_key`], persisted as a sorted JSON object.
#[derive(Debug, Clone, Default)]
pub struct TranslationCache {
    entries: BTreeMap<String, String>,
    path: Option<PathBuf>,
    dirty: bool,
    pub hits: usize,
    pub misses: usize,
}

impl TranslationCache {
    /// Opens the cache file at `path`, starting empty when it does not exist.
    pub fn open(path: &Path) -> Result<Self, TranslateError> {
        let err = |message: String| TranslateError::Cache { path: path.display().to_string(), message };
        let entries = match std::fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text).map_err(|e| err(e.to_string()))?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(err(e.to_string())),
        };
        Ok(TranslationCache { entries, path: Some(path.to_path_buf()), ..Default::default() })
    }

    pub fn get(&mut self, source: &str, target: &str, text: &str) -> Option<&str> {
        match self.entries.get(&cache_key(source, target, text)) {
            Some(v) => {
                self.hits += 1;
                Some(v)
            }
            None => {
                self.misses += 1;
                None
            }
        }
    }

    pub fn insert(&mut self, source: &str, target: &str, text: &str, translated: &str) {
        self.entries.insert(cache_key(source, target, text), translated.to_string());
        self.dirty = true;
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Writes the file if anything changed since it was opened.
    pub fn save(&mut self) -> Result<(), TranslateError> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        if !self.dirty {
            return Ok(());
        }
        let err = |message: String| TranslateError::Cache { path: path.display().to_string(), message };
        let text = serde_json::to_string_pretty(&self.entries).map_err(|e| err(e.to_string()))? + "\n";
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, text).map_err(|e| err(e.to_string()))?;
        std::fs::rename(&tmp, path).map_err(|e| err(e.to_string()))?;
        self.dirty = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn survives_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(CACHE_FILE);
        let mut c = TranslationCache::open(&path).unwrap();
        assert!(c.is_empty());
        c.insert("nl", "en", "hallo", "hello");
        c.save().unwrap();
        let mut again = TranslationCache::open(&path).unwrap();
        assert_eq!(again.get("nl", "en", "hallo"), Some("hello"));
        assert_eq!(again.get("nl", "de", "hallo"), None);
        assert_eq!((again.hits, again.misses), (1, 1));
    }

    #[test]
    fn key_is_sha256_of_concatenation() {
        assert_eq!(cache_key("nl", "en", "x"), hex::encode(Sha256::digest(b"nlenx")));
    }
}
