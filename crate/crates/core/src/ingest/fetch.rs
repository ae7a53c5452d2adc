use std::path::{Path, PathBuf};
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{IngestError, Manifest};

/// Retrieves remote documents. The network implementation lives outside this crate.
pub trait Fetcher {
    fn fetch(&self, url: &str) -> Result<Vec<u8>, String>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FetchStatus {
    Ok,
    ChecksumMismatch,
    FetchFailed,
    ExtractionFailed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchRecord {
    pub doc_id: String,
    pub status: FetchStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FetchReport {
    pub records: Vec<FetchRecord>,
    pub remote_requests: usize,
    /// Sum of the politeness delays that were slept, in seconds.
    #[serde(skip)]
    pub slept_s: f64,
}

impl FetchReport {
    pub fn count(&self, status: FetchStatus) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayPolicy {
    pub min_s: f64,
    pub max_s: f64,
    pub seed: u64,
}

impl DelayPolicy {
    pub fn none() -> Self {
        DelayPolicy { min_s: 0.0, max_s: 0.0, seed: 0 }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// File name a fetched document is stored under.
pub fn raw_file_name(doc_id: &str) -> String {
    format!("{doc_id}.segments.jsonl")
}

/// Fetches or copies every manifest entry into `dest_dir`. Remote requests are
/// separated by a uniform random delay; local sources (resolved against
/// `base_dir`) never touch the network. Single failures are recorded, not fatal.
pub fn fetch_documents(
    manifest: &Manifest,
    base_dir: &Path,
    delay: DelayPolicy,
    dest_dir: &Path,
    fetcher: Option<&dyn Fetcher>,
    sleep: &mut dyn FnMut(Duration),
) -> Result<FetchReport, IngestError> {
    if !(0.0 <= delay.min_s && delay.min_s <= delay.max_s) {
        return Err(IngestError::Config(format!("delay range [{}, {}] is invalid", delay.min_s, delay.max_s)));
    }
    std::fs::create_dir_all(dest_dir).map_err(|e| IngestError::io(dest_dir, e))?;
    let mut rng = ChaCha8Rng::seed_from_u64(delay.seed);
    let mut report = FetchReport::default();

    for entry in &manifest.entries {
        let bytes = if entry.is_remote() {
            if report.remote_requests > 0 {
                let d =
                    if delay.max_s > delay.min_s { rng.random_range(delay.min_s..=delay.max_s) } else { delay.min_s };
                sleep(Duration::from_secs_f64(d));
                report.slept_s += d;
            }
            report.remote_requests += 1;
            match fetcher {
                Some(f) => f.fetch(&entry.source),
                None => Err("no network fetcher configured".to_string()),
            }
        } else {
            let path: PathBuf = base_dir.join(&entry.source);
            std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))
        };
        let record = match bytes {
            Err(message) => FetchRecord {
                doc_id: entry.doc_id.clone(),
                status: FetchStatus::FetchFailed,
                sha256: None,
                message: Some(message),
            },
            Ok(bytes) => {
                let digest = sha256_hex(&bytes);
                let target = dest_dir.join(raw_file_name(&entry.doc_id));
                std::fs::write(&target, &bytes).map_err(|e| IngestError::io(&target, e))?;
                let mismatch = entry.expected_sha256.as_deref().is_some_and(|want| !want.eq_ignore_ascii_case(&digest));
                FetchRecord {
                    doc_id: entry.doc_id.clone(),
                    status: if mismatch { FetchStatus::ChecksumMismatch } else { FetchStatus::Ok },
                    message: mismatch
                        .then(|| format!("expected {}", entry.expected_sha256.as_deref().unwrap_or_default())),
                    sha256: Some(digest),
                }
            }
        };
        if record.status != FetchStatus::Ok {
            log::warn!("{}: {:?} {}", record.doc_id, record.status, record.message.as_deref().unwrap_or(""));
        }
        report.records.push(record);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::ManifestEntry;
    use std::cell::Cell;

    fn entry(id: &str, source: &str, sha: Option<&str>) -> ManifestEntry {
        ManifestEntry {
            doc_id: id.into(),
            category: "Population".into(),
            source: source.into(),
            expected_sha256: sha.map(str::to_string),
            additional_categories: Vec::new(),
            landing_page: None,
        }
    }

    struct CountingFetcher(Cell<usize>);

    impl Fetcher for CountingFetcher {
        fn fetch(&self, url: &str) -> Result<Vec<u8>, String> {
            self.0.set(self.0.get() + 1);
            if url.ends_with("/bad") {
                Err("HTTP 404".into())
            } else {
                Ok(url.as_bytes().to_vec())
            }
        }
    }

    #[test]
    fn local_copies_and_checksums() {
        let src = tempfile::tempdir().unwrap();
        let dest = tempfile::tempdir().unwrap();
        for name in ["a", "b", "c"] {
            std::fs::write(src.path().join(name), name).unwrap();
        }
        let wrong = "0".repeat(64);
        let manifest = Manifest {
            entries: vec![
                entry("A", "a", Some(&sha256_hex(b"a"))),
                entry("B", "b", Some(&wrong)),
                entry("C", "c", None),
            ],
        };
        let fetcher = CountingFetcher(Cell::new(0));
        let mut slept = Vec::new();
        let report = fetch_documents(
            &manifest,
            src.path(),
            DelayPolicy { min_s: 1.0, max_s: 5.0, seed: 1 },
            dest.path(),
            Some(&fetcher),
            &mut |d| slept.push(d),
        )
        .unwrap();
        assert_eq!(fetcher.0.get(), 0);
        assert!(slept.is_empty());
        let statuses: Vec<_> = report.records.iter().map(|r| r.status).collect();
        assert_eq!(statuses, vec![FetchStatus::Ok, FetchStatus::ChecksumMismatch, FetchStatus::Ok]);
        assert_eq!(std::fs::read_to_string(dest.path().join("C.segments.jsonl")).unwrap(), "c");
    }

    #[test]
    fn remote_delays_within_bounds_and_failures_recorded() {
        let dest = tempfile::tempdir().unwrap();
        let manifest = Manifest {
            entries: vec![
                entry("A", "http://h/a", None),
                entry("B", "http://h/bad", None),
                entry("C", "missing-local-file", None),
                entry("D", "https://h/d", None),
            ],
        };
        let fetcher = CountingFetcher(Cell::new(0));
        let mut slept = Vec::new();
        let report = fetch_documents(
            &manifest,
            dest.path(),
            DelayPolicy { min_s: 1.0, max_s: 5.0, seed: 9 },
            dest.path(),
            Some(&fetcher),
            &mut |d| slept.push(d.as_secs_f64()),
        )
        .unwrap();
        assert_eq!(fetcher.0.get(), 3);
        assert_eq!(slept.len(), 2);
        assert!(slept.iter().all(|d| (1.0..=5.0).contains(d)));
        assert_eq!(report.count(FetchStatus::Ok), 2);
        assert_eq!(report.count(FetchStatus::FetchFailed), 2);
    }

    #[test]
    fn bad_delay_range() {
        let dest = tempfile::tempdir().unwrap();
        let r = fetch_documents(
            &Manifest::default(),
            dest.path(),
            DelayPolicy { min_s: 3.0, max_s: 1.0, seed: 0 },
            dest.path(),
            None,
            &mut |_| {},
        );
        assert!(matches!(r, Err(IngestError::Config(_))));
    }
}
