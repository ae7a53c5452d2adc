//! JSON shapes shared by the CLI and the HTTP API, so both print the same
//! result for the same input.

use metakg_core::embed::{EmbedError, EmbeddingTable};
use metakg_core::mine::{Atom, HornRule};
use metakg_core::model::LocalNamespace;
use metakg_core::store::{BgpQuery, TripleStore};
use serde::Serialize;
use serde_json::{Map, Value};

pub const MAX_PATTERNS: usize = 10;
pub const MAX_ROWS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryResult {
    pub vars: Vec<String>,
    pub rows: Vec<Map<String, Value>>,
    pub truncated: bool,
}

pub fn run_query(store: &TripleStore, query: &BgpQuery, cap: usize) -> QueryResult {
    let bindings = store.evaluate_bgp(query);
    let mut rows = bindings.to_json_rows();
    let truncated = rows.len() > cap;
    rows.truncate(cap);
    QueryResult { vars: bindings.vars, rows, truncated }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarNode {
    pub node: String,
    /// Dataset id when the node is a dataset.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub score: f64,
}

/// Top-`k` neighbours of `node` by cosine; with `datasets_only`, other node kinds are skipped.
pub fn similar_nodes(
    table: &EmbeddingTable,
    ns: &LocalNamespace,
    node: &str,
    k: usize,
    datasets_only: bool,
) -> Result<Vec<SimilarNode>, EmbedError> {
    let hits = table.similar_where(node, k, |n| !datasets_only || ns.dataset_id(n).is_some())?;
    Ok(hits
        .into_iter()
        .map(|(node, score)| SimilarNode { id: ns.dataset_id(&node).map(str::to_string), node, score })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleView {
    pub rule: String,
    pub body: Vec<Atom>,
    pub head: Atom,
    pub support: u64,
    pub head_coverage: f64,
    pub std_confidence: f64,
    pub pca_confidence: f64,
}

impl From<&HornRule> for RuleView {
    fn from(r: &HornRule) -> Self {
        RuleView {
            rule: r.canonical_text(),
            body: r.body.clone(),
            head: r.head.clone(),
            support: r.scores.support,
            head_coverage: r.scores.head_coverage,
            std_confidence: r.scores.std_confidence,
            pca_confidence: r.scores.pca_confidence,
        }
    }
}
