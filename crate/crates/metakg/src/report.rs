//! Category table and the machine-readable pipeline report.

use std::collections::{BTreeMap, BTreeSet};

use metakg_core::ingest::{FetchRecord, CATEGORIES};
use metakg_core::model::iri::slug;
use metakg_core::model::vocab::{DCT_HAS_PART, DCT_IS_PART_OF};
use metakg_core::model::{LocalNamespace, Term};
use metakg_core::store::{multi_category_report, shared_variable_report, SharedVariables, TripleStore};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CategoryRow {
    pub category: String,
    pub datasets: usize,
    pub variables: usize,
}

/// Dataset and distinct-variable counts for every category in the closed
/// list, in list order. Totals are column sums, so a dataset listed in two
/// categories counts twice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CategoryTable {
    pub rows: Vec<CategoryRow>,
    pub total_datasets: usize,
    pub total_variables: usize,
}

pub fn category_table(store: &TripleStore, ns: &LocalNamespace) -> CategoryTable {
    let variable_of = Term::Iri(ns.variable_of());
    let mut rows = Vec::new();
    for name in CATEGORIES {
        let catalog = Term::Iri(ns.catalog(&slug(name)));
        let mut datasets: BTreeSet<Term> = store
            .match_pattern(None, Some(&Term::Iri(DCT_IS_PART_OF.into())), Some(&catalog))
            .into_iter()
            .map(|t| t.subject().clone())
            .collect();
        datasets.extend(
            store
                .match_pattern(Some(&catalog), Some(&Term::Iri(DCT_HAS_PART.into())), None)
                .into_iter()
                .map(|t| t.object().clone()),
        );
        let variables: BTreeSet<Term> = datasets
            .iter()
            .flat_map(|d| store.match_pattern(None, Some(&variable_of), Some(d)))
            .map(|t| t.subject().clone())
            .collect();
        rows.push(CategoryRow { category: name.to_string(), datasets: datasets.len(), variables: variables.len() });
    }
    CategoryTable {
        total_datasets: rows.iter().map(|r| r.datasets).sum(),
        total_variables: rows.iter().map(|r| r.variables).sum(),
        rows,
    }
}

impl CategoryTable {
    /// Aligned plain-text rendering with a totals row.
    pub fn to_text(&self) -> String {
        let width = self.rows.iter().map(|r| r.category.len()).max().unwrap_or(0).max("Category".len());
        let mut out = format!("{:<width$}  {:>8}  {:>9}\n", "Category", "Datasets", "Variables");
        for r in &self.rows {
            out += &format!("{:<width$}  {:>8}  {:>9}\n", r.category, r.datasets, r.variables);
        }
        out += &format!("{:<width$}  {:>8}  {:>9}\n", "Total", self.total_datasets, self.total_variables);
        out
    }
}

/// Datasets taking part in at least one shared-variable pair.
pub fn overlapping_datasets(pairs: &[SharedVariables]) -> BTreeSet<String> {
    pairs.iter().flat_map(|p| [p.dataset_a.clone(), p.dataset_b.clone()]).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSummary {
    pub categories: CategoryTable,
    pub shared_variables: Vec<SharedVariables>,
    pub overlapping_datasets: Vec<String>,
    pub multi_category: BTreeMap<String, usize>,
    /// Number of datasets per category count (2, 3, ...).
    pub multi_category_histogram: BTreeMap<usize, usize>,
}

pub fn graph_summary(store: &TripleStore, ns: &LocalNamespace) -> GraphSummary {
    let shared = shared_variable_report(store, ns);
    let multi = multi_category_report(store);
    let mut histogram = BTreeMap::new();
    for &n in multi.values() {
        *histogram.entry(n).or_default() += 1;
    }
    GraphSummary {
        categories: category_table(store, ns),
        overlapping_datasets: overlapping_datasets(&shared).into_iter().collect(),
        shared_variables: shared,
        multi_category: multi,
        multi_category_histogram: histogram,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IngestSummary {
    pub entries: usize,
    pub documents: usize,
    pub remote_requests: usize,
    pub failures: Vec<FetchRecord>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TranslateSummary {
    pub documents: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ExtractSummary {
    pub documents: usize,
    pub variables: usize,
    pub keywords: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MapSummary {
    pub emitted: usize,
    pub unique: usize,
    pub per_map: Vec<(String, usize)>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MineSummary {
    pub rules: usize,
    pub skipped_literal_triples: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EmbedSummary {
    pub nodes: usize,
    pub dims: usize,
    pub first_epoch_loss: f64,
    pub final_epoch_loss: f64,
}

/// Contents of `report.json`. Holds no timings or timestamps so that
/// reruns on the same inputs produce the same bytes.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PipelineReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ingest: Option<IngestSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub translate: Option<TranslateSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extract: Option<ExtractSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mine: Option<MineSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inferred: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embed: Option<EmbedSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSummary>,
}

impl PipelineReport {
    pub fn has_failures(&self) -> bool {
        self.ingest.as_ref().is_some_and(|i| !i.failures.is_empty())
            || self.translate.as_ref().is_some_and(|t| !t.failures.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_gives_zero_table() {
        let table = category_table(&TripleStore::new(), &LocalNamespace::default());
        assert_eq!(table.rows.len(), CATEGORIES.len());
        assert!(table.rows.iter().all(|r| r.datasets == 0 && r.variables == 0));
        assert_eq!((table.total_datasets, table.total_variables), (0, 0));
        let text = table.to_text();
        assert!(text.starts_with("Category"));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), CATEGORIES.len() + 2);
        assert!(lines.iter().all(|l| l.len() == lines[0].len()), "{text}");
        assert!(lines.last().unwrap().starts_with("Total"));
    }
}
