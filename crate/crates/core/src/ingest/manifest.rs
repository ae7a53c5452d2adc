use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::IngestError;

/// The closed category vocabulary of the catalog being harvested.
pub const CATEGORIES: [&str; 19] = [
    "Labour and social security",
    "Business",
    "Population",
    "Build and live",
    "Financial and business services",
    "Health and wellbeing",
    "Trade and catering",
    "Income and expenditure",
    "International trade",
    "Industry and energy",
    "Agriculture",
    "Macroeconomy",
    "Nature and environment",
    "Education",
    "Government and politics",
    "Prices",
    "Security and justice",
    "Traffic and transport",
    "Leisure and culture",
];

/// Canonical spelling of `name` if it is a known category (case-insensitive).
pub fn canonical_category(name: &str) -> Option<&'static str> {
    CATEGORIES.iter().copied().find(|c| c.eq_ignore_ascii_case(name.trim()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub doc_id: String,
    pub category: String,
    /// `http(s)://` URL or a path relative to the manifest file.
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_sha256: Option<String>,
    /// Further categories listing the same dataset.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub additional_categories: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub landing_page: Option<String>,
}

impl ManifestEntry {
    pub fn is_remote(&self) -> bool {
        self.source.starts_with("http://") || self.source.starts_with("https://")
    }

    /// Primary category followed by the additional ones.
    pub fn categories(&self) -> Vec<&str> {
        std::iter::once(self.category.as_str()).chain(self.additional_categories.iter().map(String::as_str)).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    /// Validates and normalizes category spelling. All violations are reported together.
    pub fn validate(mut self) -> Result<Self, IngestError> {
        let mut problems = Vec::new();
        let mut seen = HashSet::new();
        for (i, e) in self.entries.iter_mut().enumerate() {
            if e.doc_id.trim().is_empty() {
                problems.push(format!("entry {i}: empty doc_id"));
            } else if !seen.insert(e.doc_id.clone()) {
                problems.push(format!("entry {i}: duplicate doc_id {:?}", e.doc_id));
            }
            if e.source.trim().is_empty() {
                problems.push(format!("entry {i} ({}): empty source", e.doc_id));
            }
            for cat in std::iter::once(&mut e.category).chain(e.additional_categories.iter_mut()) {
                match canonical_category(cat) {
                    Some(c) => *cat = c.to_string(),
                    None => problems.push(format!("entry {i} ({}): unknown category {cat:?}", e.doc_id)),
                }
            }
            if let Some(h) = &e.expected_sha256 {
                if h.len() != 64 || !h.bytes().all(|b| b.is_ascii_hexdigit()) {
                    problems.push(format!("entry {i} ({}): expected_sha256 is not 64 hex digits", e.doc_id));
                }
            }
        }
        if problems.is_empty() {
            Ok(self)
        } else {
            Err(IngestError::Manifest(problems))
        }
    }
}

pub fn parse_manifest(text: &str) -> Result<Manifest, IngestError> {
    let manifest: Manifest =
        serde_json::from_str(text).map_err(|e| IngestError::Manifest(vec![format!("malformed manifest: {e}")]))?;
    manifest.validate()
}

pub fn load_manifest(path: &Path) -> Result<Manifest, IngestError> {
    let text = std::fs::read_to_string(path).map_err(|e| IngestError::io(path, e))?;
    parse_manifest(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_manifest() {
        assert_eq!(parse_manifest(r#"{"entries": []}"#).unwrap().entries.len(), 0);
    }

    #[test]
    fn all_violations_listed() {
        let text = r#"{"entries": [
            {"doc_id": "A", "category": "Astrology", "source": "a.jsonl"},
            {"doc_id": "A", "category": "population", "source": "b.jsonl", "expected_sha256": "xyz"}
        ]}"#;
        match parse_manifest(text) {
            Err(IngestError::Manifest(p)) => {
                assert_eq!(p.len(), 3, "{p:?}");
                assert!(p[0].contains("Astrology"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn category_spelling_normalized() {
        let m = parse_manifest(
            r#"{"entries": [{"doc_id": "A", "category": "health AND wellbeing", "source": "a", "additional_categories": ["prices"]}]}"#,
        )
        .unwrap();
        assert_eq!(m.entries[0].categories(), vec!["Health and wellbeing", "Prices"]);
    }
}
