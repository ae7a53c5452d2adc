//! Manifest-driven document harvesting and layout-based text reconstruction.

mod document;
mod fetch;
mod layout;
mod manifest;

use std::path::Path;

use thiserror::Error;

pub use document::{segment_sections, DescriptionDocument, Sections, VariableRow, DEFAULT_VARIABLE_HEADERS};
pub use fetch::{
    fetch_documents, raw_file_name, sha256_hex, DelayPolicy, FetchRecord, FetchReport, FetchStatus, Fetcher,
};
pub use layout::{parse_segments, reconstruct_text, Direction, LayoutConfig, LayoutSegment, Line, Paragraph};
pub use manifest::{canonical_category, load_manifest, parse_manifest, Manifest, ManifestEntry, CATEGORIES};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("invalid manifest: {}", .0.join("; "))]
    Manifest(Vec<String>),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("segment line {line}: {message}")]
    Segment { line: usize, message: String },
    #[error("{0}")]
    Config(String),
}

impl IngestError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        IngestError::Io { path: path.display().to_string(), source }
    }
}

/// Turns a fetched segment file into a description document.
pub fn build_document(
    entry: &ManifestEntry,
    segments_jsonl: &str,
    sha256: &str,
    fetched_at: &str,
    layout: &LayoutConfig,
    headers: &[String],
) -> Result<DescriptionDocument, IngestError> {
    let segments = parse_segments(segments_jsonl)?;
    let paragraphs = reconstruct_text(&segments, layout);
    let sections = segment_sections(&paragraphs, headers);
    let mut warnings = Vec::new();
    let title_nl = sections.title.unwrap_or_else(|| {
        warnings.push(format!("no title found, using doc_id {}", entry.doc_id));
        log::warn!("{}: no title found", entry.doc_id);
        entry.doc_id.clone()
    });
    Ok(DescriptionDocument {
        doc_id: entry.doc_id.clone(),
        category: entry.category.clone(),
        additional_categories: entry.additional_categories.clone(),
        landing_page: entry.landing_page.clone(),
        title_nl,
        paragraphs_nl: sections.paragraphs,
        variable_rows: sections.variable_rows,
        fetched_at: fetched_at.to_string(),
        sha256: sha256.to_string(),
        title_en: None,
        paragraphs_en: None,
        warnings,
    })
}
