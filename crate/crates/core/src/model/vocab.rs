//! DCAT / Dublin Core Terms constants and the local namespace for minted resources.

use serde::{Deserialize, Serialize};

use super::iri::percent_encode_iri_safe;
use super::term::Term;

pub const DCT: &str = "http://purl.org/dc/terms/";
pub const DCAT: &str = "http://www.w3.org/ns/dcat#";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const FOAF: &str = "http://xmlns.com/foaf/0.1/";

pub const DCT_ISSUED: &str = "http://purl.org/dc/terms/issued";
pub const DCT_TITLE: &str = "http://purl.org/dc/terms/title";
pub const DCT_DESCRIPTION: &str = "http://purl.org/dc/terms/description";
pub const DCT_IDENTIFIER: &str = "http://purl.org/dc/terms/identifier";
pub const DCT_LANGUAGE: &str = "http://purl.org/dc/terms/language";
pub const DCT_IS_PART_OF: &str = "http://purl.org/dc/terms/isPartOf";
pub const DCT_HAS_PART: &str = "http://purl.org/dc/terms/hasPart";
pub const DCT_PUBLISHER: &str = "http://purl.org/dc/terms/publisher";
pub const DCT_CREATOR: &str = "http://purl.org/dc/terms/creator";
pub const DCAT_LANDING_PAGE: &str = "http://www.w3.org/ns/dcat#landingPage";
pub const DCAT_KEYWORD: &str = "http://www.w3.org/ns/dcat#keyword";
pub const DCAT_THEME: &str = "http://www.w3.org/ns/dcat#theme";
pub const DCAT_DATASET: &str = "http://www.w3.org/ns/dcat#Dataset";
pub const DCAT_CATALOG: &str = "http://www.w3.org/ns/dcat#Catalog";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
pub const XSD_DATE: &str = "http://www.w3.org/2001/XMLSchema#date";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_ANY_URI: &str = "http://www.w3.org/2001/XMLSchema#anyURI";

pub const DEFAULT_LOCAL_NAMESPACE: &str = "http://data.example.org/cbs/";

/// Every standard IRI constant above that describes catalog metadata.
pub const CATALOG_TERMS: &[&str] = &[
    DCT_ISSUED,
    DCT_TITLE,
    DCT_DESCRIPTION,
    DCT_IDENTIFIER,
    DCT_LANGUAGE,
    DCT_IS_PART_OF,
    DCT_HAS_PART,
    DCT_PUBLISHER,
    DCT_CREATOR,
    DCAT_LANDING_PAGE,
    DCAT_KEYWORD,
    DCAT_THEME,
    DCAT_DATASET,
    DCAT_CATALOG,
];

/// Prefix table used for compact display (DOT labels, rule listings).
pub const PREFIXES: &[(&str, &str)] =
    &[("dct", DCT), ("dcat", DCAT), ("rdf", RDF), ("rdfs", RDFS), ("xsd", XSD), ("foaf", FOAF)];

/// The configurable namespace under which datasets, variables, keywords,
/// organizations and catalogs are minted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalNamespace {
    base: String,
}

impl Default for LocalNamespace {
    fn default() -> Self {
        LocalNamespace { base: DEFAULT_LOCAL_NAMESPACE.to_string() }
    }
}

impl LocalNamespace {
    pub fn new(base: &str) -> Result<Self, super::TermError> {
        Term::iri(base)?;
        Ok(LocalNamespace { base: base.trim().to_string() })
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    fn mint(&self, kind: &str, id: &str) -> String {
        format!("{}{}/{}", self.base, kind, percent_encode_iri_safe(id))
    }

    pub fn dataset(&self, doc_id: &str) -> String {
        self.mint("dataset", doc_id)
    }

    pub fn variable(&self, var_name: &str) -> String {
        self.mint("variable", var_name)
    }

    pub fn keyword(&self, keyword: &str) -> String {
        self.mint("keyword", keyword)
    }

    pub fn organization(&self, name: &str) -> String {
        self.mint("organization", name)
    }

    pub fn catalog(&self, category_id: &str) -> String {
        self.mint("catalog", category_id)
    }

    /// Local vocabulary term, e.g. `vocab#variableOf`.
    pub fn vocab(&self, local: &str) -> String {
        format!("{}vocab#{}", self.base, local)
    }

    /// Links a variable to the dataset that contains it.
    pub fn variable_of(&self) -> String {
        self.vocab("variableOf")
    }

    /// Strips the dataset prefix from a dataset IRI.
    pub fn dataset_id<'a>(&self, iri: &'a str) -> Option<&'a str> {
        iri.strip_prefix(&self.base)?.strip_prefix("dataset/")
    }
}

/// Compacts an IRI with the known prefixes and the local namespace (`local:`).
pub fn compact(iri: &str, local: &LocalNamespace) -> String {
    for (prefix, ns) in PREFIXES {
        if let Some(rest) = iri.strip_prefix(ns) {
            return format!("{prefix}:{rest}");
        }
    }
    if let Some(rest) = iri.strip_prefix(local.base()) {
        return format!("local:{rest}");
    }
    iri.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_are_valid_and_namespaced() {
        for iri in CATALOG_TERMS {
            assert!(Term::iri(iri).is_ok(), "{iri}");
            assert!(iri.starts_with(DCT) || iri.starts_with(DCAT), "{iri}");
        }
        let local = LocalNamespace::default();
        for iri in [
            local.dataset("D1"),
            local.variable("GBAGESLACHT"),
            local.keyword("death"),
            local.organization("Statistics Netherlands"),
            local.catalog("health"),
            local.variable_of(),
        ] {
            assert!(Term::iri(&iri).is_ok(), "{iri}");
            assert!(iri.starts_with(local.base()));
        }
    }

    #[test]
    fn dataset_id_roundtrip() {
        let local = LocalNamespace::default();
        let iri = local.dataset("age-at-death");
        assert_eq!(local.dataset_id(&iri), Some("age-at-death"));
        assert_eq!(local.dataset_id(DCT_TITLE), None);
    }

    #[test]
    fn compacts() {
        let local = LocalNamespace::default();
        assert_eq!(compact(DCT_HAS_PART, &local), "dct:hasPart");
        assert_eq!(compact(&local.dataset("x"), &local), "local:dataset/x");
        assert_eq!(compact("urn:a", &local), "urn:a");
    }
}
