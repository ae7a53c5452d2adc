use std::collections::HashSet;
use std::path::Path;

use super::{DocExtraction, ExtractError};
use crate::ingest::DescriptionDocument;
use crate::mapping::LogicalTable;
use crate::model::iri::slug;

pub const DEFAULT_PUBLISHER: &str = "Statistics Netherlands";

pub const DATASETS_CSV: &str = "datasets.csv";
pub const VARIABLES_CSV: &str = "variables.csv";
pub const KEYWORDS_CSV: &str = "keywords.csv";
pub const CATEGORIES_CSV: &str = "categories.csv";

const DATASET_COLUMNS: [&str; 10] = [
    "doc_id",
    "title_nl",
    "title_en",
    "description_en",
    "category",
    "issued_date",
    "publisher",
    "creator",
    "landing_page",
    "all_dates",
];

/// Relational staging tables read by the mapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetadataTables {
    pub datasets: LogicalTable,
    pub variables: LogicalTable,
    pub keywords: LogicalTable,
    /// One row per (dataset, category) membership.
    pub categories: LogicalTable,
    pub warnings: Vec<String>,
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

/// One datasets row per document, in input order. `extractions` must be
/// parallel to `docs`.
pub fn build_metadata_tables(
    docs: &[DescriptionDocument],
    extractions: &[DocExtraction],
) -> Result<MetadataTables, ExtractError> {
    if docs.len() != extractions.len() {
        return Err(ExtractError::Mismatch(format!(
            "{} documents but {} extraction results",
            docs.len(),
            extractions.len()
        )));
    }
    let mut datasets = Vec::new();
    let mut variables = Vec::new();
    let mut keywords = Vec::new();
    let mut categories = Vec::new();
    let mut warnings = Vec::new();
    for (doc, ex) in docs.iter().zip(extractions) {
        if doc.doc_id != ex.doc_id {
            return Err(ExtractError::Mismatch(format!(
                "extraction for {} paired with document {}",
                ex.doc_id, doc.doc_id
            )));
        }
        let issued = ex.dates.iter().map(|d| d.normalized.as_str()).filter(|d| d.len() == 10).min().unwrap_or("");
        let mut all_dates: Vec<&str> = Vec::new();
        for d in &ex.dates {
            if !all_dates.contains(&d.normalized.as_str()) {
                all_dates.push(&d.normalized);
            }
        }
        datasets.push(vec![
            doc.doc_id.clone(),
            doc.title_nl.clone(),
            doc.title_en.clone().unwrap_or_default(),
            doc.paragraphs_en.as_ref().map(|p| p.join("\n\n")).unwrap_or_default(),
            doc.category.clone(),
            issued.to_string(),
            ex.organizations.first().map_or(DEFAULT_PUBLISHER.to_string(), |o| o.normalized.clone()),
            ex.persons.first().map(|p| p.normalized.clone()).unwrap_or_default(),
            doc.landing_page.clone().unwrap_or_default(),
            all_dates.join(";"),
        ]);
        for cat in doc.categories() {
            categories.push(vec![doc.doc_id.clone(), cat.to_string(), slug(cat)]);
        }
        let mut seen = HashSet::new();
        for v in &doc.variable_rows {
            if !seen.insert(v.name.as_str()) {
                let w = format!("{}: duplicate variable {} collapsed", doc.doc_id, v.name);
                log::warn!("{w}");
                warnings.push(w);
                continue;
            }
            let label = v.label_en.clone().unwrap_or_else(|| v.label_nl.clone());
            variables.push(vec![doc.doc_id.clone(), v.name.clone(), label]);
        }
        for k in &ex.keywords {
            keywords.push(vec![doc.doc_id.clone(), k.to_lowercase()]);
        }
    }
    Ok(MetadataTables {
        datasets: LogicalTable::new(header(&DATASET_COLUMNS), datasets)?,
        variables: LogicalTable::new(header(&["doc_id", "var_name", "var_label_en"]), variables)?,
        keywords: LogicalTable::new(header(&["doc_id", "keyword"]), keywords)?,
        categories: LogicalTable::new(header(&["doc_id", "category", "category_id"]), categories)?,
        warnings,
    })
}

impl MetadataTables {
    pub fn files(&self) -> [(&'static str, &LogicalTable); 4] {
        [
            (DATASETS_CSV, &self.datasets),
            (VARIABLES_CSV, &self.variables),
            (KEYWORDS_CSV, &self.keywords),
            (CATEGORIES_CSV, &self.categories),
        ]
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, table) in self.files() {
            std::fs::write(dir.join(name), table.to_csv_string())?;
        }
        Ok(())
    }
}
