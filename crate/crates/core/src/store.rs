//! Memo stores for computed invariants, plus the JSON-lines cache file.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use dashmap::DashMap;
use thiserror::Error;

use crate::poly::{PolyError, RefinedPolynomial};

/// Version tag written on every cache line.
pub const CACHE_FORMAT_VERSION: u64 = 1;

/// A concurrent map from [`canonical_key`](crate::Degree::canonical_key) to
/// invariant. Concurrent inserts of equal values must be idempotent.
pub trait MemoStore: Sync {
    fn get(&self, key: &str) -> Option<RefinedPolynomial>;
    fn insert(&self, key: String, value: RefinedPolynomial);
}

/// Disables memoization.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoCache;

impl MemoStore for NoCache {
    fn get(&self, _key: &str) -> Option<RefinedPolynomial> {
        None
    }

    fn insert(&self, _key: String, _value: RefinedPolynomial) {}
}

#[derive(Debug, Default)]
pub struct MemoCache {
    map: DashMap<String, RefinedPolynomial>,
}

impl MemoCache {
    pub fn new() -> Self {
        MemoCache::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Snapshot of all entries, sorted by key.
    pub fn entries(&self) -> Vec<(String, RefinedPolynomial)> {
        let mut out: Vec<_> = self
            .map
            .iter()
            .map(|e| (e.key().clone(), e.value().clone()))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Reads a JSON-lines cache file into a fresh cache.
    pub fn load(path: &Path) -> Result<Self, CacheError> {
        let cache = MemoCache::new();
        let reader = BufReader::new(File::open(path)?);
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (key, poly) = parse_line(&line).map_err(|reason| CacheError::Malformed {
                line: idx + 1,
                reason,
            })?;
            cache.map.insert(key, poly);
        }
        Ok(cache)
    }

    /// Writes every entry, one JSON object per line, sorted by key.
    pub fn save(&self, path: &Path) -> Result<(), CacheError> {
        let mut w = BufWriter::new(File::create(path)?);
        for (key, poly) in self.entries() {
            let line = serde_json::json!({
                "version": CACHE_FORMAT_VERSION,
                "key": key,
                "poly": poly.to_json(),
            });
            writeln!(w, "{line}")?;
        }
        w.flush()?;
        Ok(())
    }
}

impl MemoStore for MemoCache {
    fn get(&self, key: &str) -> Option<RefinedPolynomial> {
        self.map.get(key).map(|e| e.value().clone())
    }

    fn insert(&self, key: String, value: RefinedPolynomial) {
        self.map.insert(key, value);
    }
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O: {0}")]
    Io(#[from] io::Error),
    #[error("cache line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

fn parse_line(line: &str) -> Result<(String, RefinedPolynomial), String> {
    let value: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let version = value
        .get("version")
        .and_then(|v| v.as_u64())
        .ok_or("missing version")?;
    if version != CACHE_FORMAT_VERSION {
        return Err(format!("unsupported cache version {version}"));
    }
    let key = value
        .get("key")
        .and_then(|k| k.as_str())
        .ok_or("missing key")?
        .to_string();
    let poly = value.get("poly").ok_or("missing poly")?;
    let poly = RefinedPolynomial::from_json(poly).map_err(|e: PolyError| e.to_string())?;
    Ok((key, poly))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let cache = MemoCache::new();
        cache.insert("(-1,0);(0,-1);(1,1)".into(), RefinedPolynomial::one());
        cache.insert(
            "(-1,0);(-1,0);(0,-2);(1,1);(1,1)".into(),
            RefinedPolynomial::from_terms([(1, 1), (-1, 1)]),
        );
        cache.save(&path).unwrap();
        let loaded = MemoCache::load(&path).unwrap();
        assert_eq!(loaded.entries(), cache.entries());
    }

    #[test]
    fn rejects_unknown_version() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        std::fs::write(
            &path,
            r#"{"version":7,"key":"(1,0);(-1,0)","poly":{"0":"1"}}"#,
        )
        .unwrap();
        let err = MemoCache::load(&path).unwrap_err();
        assert!(
            matches!(err, CacheError::Malformed { line: 1, .. }),
            "{err}"
        );
    }

    #[test]
    fn no_cache_never_stores() {
        NoCache.insert("k".into(), RefinedPolynomial::one());
        assert_eq!(NoCache.get("k"), None);
    }
}
