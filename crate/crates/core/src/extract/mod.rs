//! Rule-based extraction of dates, organizations, persons and keywords, and
//! assembly of the CSV tables the mapping consumes.

mod dates;
mod entities;
mod keywords;
mod tables;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dates::extract_dates;
pub use entities::{extract_organizations, extract_persons, Gazetteer, GazetteerEntry};
pub use keywords::{candidate_terms, extract_keywords, parse_stoplist, CorpusStats, DEFAULT_STOPLIST};
pub use tables::{
    build_metadata_tables, MetadataTables, CATEGORIES_CSV, DATASETS_CSV, DEFAULT_PUBLISHER, KEYWORDS_CSV, VARIABLES_CSV,
};

use crate::ingest::DescriptionDocument;
use crate::mapping::MappingError;

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("gazetteer: {0}")]
    Gazetteer(String),
    #[error("{0}")]
    Mismatch(String),
    #[error(transparent)]
    Table(#[from] MappingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Date,
    Organization,
    Person,
    Keyword,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractedEntity {
    pub kind: EntityKind,
    pub surface: String,
    pub normalized: String,
    /// Character offsets, end exclusive.
    pub span: (usize, usize),
    pub doc_id: String,
}

/// Converts a byte range of `text` to character offsets.
pub(crate) fn char_span(text: &str, start: usize, end: usize) -> (usize, usize) {
    let s = text[..start].chars().count();
    (s, s + text[start..end].chars().count())
}

/// Slices `text` by character offsets.
pub fn slice_chars(text: &str, span: (usize, usize)) -> String {
    text.chars().skip(span.0).take(span.1 - span.0).collect()
}

/// Everything extracted from one document.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocExtraction {
    pub doc_id: String,
    pub dates: Vec<ExtractedEntity>,
    pub organizations: Vec<ExtractedEntity>,
    pub persons: Vec<ExtractedEntity>,
    pub keywords: Vec<String>,
}

/// English text of a document (title then paragraphs), falling back to Dutch
/// for parts that were not translated.
pub fn document_text(doc: &DescriptionDocument) -> String {
    let title = doc.title_en.as_deref().unwrap_or(&doc.title_nl);
    let paragraphs = doc.paragraphs_en.as_ref().unwrap_or(&doc.paragraphs_nl);
    std::iter::once(title).chain(paragraphs.iter().map(String::as_str)).collect::<Vec<_>>().join("\n")
}

#[derive(Debug, Clone)]
pub struct ExtractConfig {
    pub gazetteer: Gazetteer,
    pub stoplist: HashSet<String>,
    pub keywords_k: usize,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        ExtractConfig { gazetteer: Gazetteer::default(), stoplist: parse_stoplist(DEFAULT_STOPLIST), keywords_k: 8 }
    }
}

/// Runs every extractor over each document. Corpus statistics are computed
/// once over all documents before keywords are ranked.
pub fn extract_corpus(docs: &[DescriptionDocument], config: &ExtractConfig) -> Vec<DocExtraction> {
    let texts: Vec<String> = docs.iter().map(document_text).collect();
    let stats = CorpusStats::build(texts.iter().map(String::as_str), &config.stoplist);
    docs.iter()
        .zip(&texts)
        .map(|(doc, text)| DocExtraction {
            doc_id: doc.doc_id.clone(),
            dates: extract_dates(text, &doc.doc_id),
            organizations: extract_organizations(text, &config.gazetteer, &doc.doc_id),
            persons: extract_persons(text, &config.gazetteer, &doc.doc_id),
            keywords: extract_keywords(text, &stats, &config.stoplist, config.keywords_k),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::VariableRow;

    fn doc(id: &str, title: &str, text: &str, vars: &[&str]) -> DescriptionDocument {
        DescriptionDocument {
            doc_id: id.into(),
            category: "Health and wellbeing".into(),
            additional_categories: vec!["Population".into()],
            landing_page: None,
            title_nl: title.into(),
            paragraphs_nl: vec![text.into()],
            variable_rows: vars
                .iter()
                .map(|v| VariableRow { name: v.to_string(), label_nl: "x".into(), label_en: Some("label".into()) })
                .collect(),
            fetched_at: String::new(),
            sha256: "0".repeat(64),
            title_en: Some(title.into()),
            paragraphs_en: Some(vec![text.into()]),
            warnings: vec![],
        }
    }

    #[test]
    fn tables_from_documents() {
        let docs = vec![
            doc(
                "D1",
                "Age at Death",
                "Published on 2 May 2019 and 1 April 2018, period 2010.",
                &["LEEFTIJD", "GESLACHT", "LEEFTIJD"],
            ),
            doc("D2", "Births", "Eurostat tables.", &[]),
        ];
        let config = ExtractConfig {
            gazetteer: Gazetteer::from_json(r#"{"organizations":[{"canonical":"Eurostat"}]}"#).unwrap(),
            ..ExtractConfig::default()
        };
        let ex = extract_corpus(&docs, &config);
        assert!(ex[0].keywords.contains(&"death".to_string()));
        let tables = build_metadata_tables(&docs, &ex).unwrap();
        let d1 = &tables.datasets.rows[0];
        assert_eq!(d1[5], "2018-04-01");
        assert_eq!(d1[6], DEFAULT_PUBLISHER);
        assert_eq!(d1[9], "2019-05-02;2018-04-01;2010");
        assert_eq!(tables.datasets.rows[1][6], "Eurostat");
        assert_eq!(tables.variables.rows.len(), 2);
        assert_eq!(tables.warnings.len(), 1);
        assert_eq!(tables.categories.rows.len(), 4);
        assert_eq!(tables.categories.rows[0][2], "health-and-wellbeing");
    }

    #[test]
    fn spans_slice_to_surface() {
        let text = "Ünïcode 31st March 2020 and Statistics Netherlands (CBS), CBS.";
        let g = Gazetteer::from_json(r#"{"organizations":[{"canonical":"Statistics Netherlands"}]}"#).unwrap();
        let all = extract_dates(text, "d").into_iter().chain(extract_organizations(text, &g, "d"));
        for e in all {
            assert_eq!(slice_chars(text, e.span), e.surface);
        }
    }
}
