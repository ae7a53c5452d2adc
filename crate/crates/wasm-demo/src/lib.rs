//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export takes plain strings and returns a JSON string, so the page
//! needs no generated glue beyond what `wasm-bindgen --target web` emits.
//! The `*_json` functions hold the logic and are callable natively.

use metakg_core::embed::{embed_store, SgnsConfig, WalkConfig};
use metakg_core::extract::extract_dates;
use metakg_core::mine::{mine_rules, MiningConfig};
use metakg_core::model::parse_ntriples;
use metakg_core::store::TripleStore;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest pasted graph the page accepts.
pub const MAX_TRIPLES: usize = 5_000;

#[derive(Serialize)]
struct DateHit {
    surface: String,
    normalized: String,
    start: usize,
    end: usize,
}

#[derive(Serialize)]
struct RuleRow {
    rule: String,
    support: u64,
    head_coverage: f64,
    std_confidence: f64,
    pca_confidence: f64,
}

#[derive(Serialize)]
struct Neighbour {
    node: String,
    score: f64,
}

fn load(ntriples: &str) -> Result<TripleStore, String> {
    let triples = parse_ntriples(ntriples).map_err(|e| e.to_string())?;
    if triples.is_empty() {
        return Err("no triples".into());
    }
    if triples.len() > MAX_TRIPLES {
        return Err(format!("{} triples, the demo takes at most {MAX_TRIPLES}", triples.len()));
    }
    Ok(TripleStore::load(&triples))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain structs serialize")
}

/// Dates found in `text`, with character offsets.
pub fn dates_json(text: &str) -> String {
    let hits: Vec<DateHit> = extract_dates(text, "demo")
        .into_iter()
        .map(|e| DateHit { surface: e.surface, normalized: e.normalized, start: e.span.0, end: e.span.1 })
        .collect();
    to_json(&hits)
}

/// Horn rules mined from N-Triples text, best first.
pub fn rules_json(ntriples: &str, max_len: usize, min_support: u64) -> Result<String, String> {
    let store = load(ntriples)?;
    let config = MiningConfig { max_len, min_support, ..MiningConfig::default() };
    config.validate().map_err(|e| e.to_string())?;
    let rows: Vec<RuleRow> = mine_rules(&store, &config)
        .rules
        .iter()
        .map(|r| RuleRow {
            rule: r.canonical_text(),
            support: r.scores.support,
            head_coverage: r.scores.head_coverage,
            std_confidence: r.scores.std_confidence,
            pca_confidence: r.scores.pca_confidence,
        })
        .collect();
    Ok(to_json(&rows))
}

/// Nearest neighbours of `node` (an IRI, with or without angle brackets)
/// after embedding the pasted graph.
pub fn similar_json(ntriples: &str, node: &str, k: usize, seed: u64) -> Result<String, String> {
    let store = load(ntriples)?;
    let walk = WalkConfig { seed, ..WalkConfig::default() };
    let sgns = SgnsConfig { dims: 16, seed, ..SgnsConfig::default() };
    let table = embed_store(&store, &walk, &sgns).map_err(|e| e.to_string())?;
    let node = node.trim().trim_start_matches('<').trim_end_matches('>');
    let hits = table.similar(node, k).map_err(|e| e.to_string())?;
    Ok(to_json(&hits.into_iter().map(|(node, score)| Neighbour { node, score }).collect::<Vec<_>>()))
}

#[wasm_bindgen(js_name = extractDates)]
pub fn extract_dates_js(text: &str) -> String {
    dates_json(text)
}

#[wasm_bindgen(js_name = mineRules)]
pub fn mine_rules_js(ntriples: &str, max_len: usize, min_support: u32) -> Result<String, JsError> {
    rules_json(ntriples, max_len, min_support.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = similarNodes)]
pub fn similar_nodes_js(ntriples: &str, node: &str, k: usize, seed: u32) -> Result<String, JsError> {
    similar_json(ntriples, node, k, seed.into()).map_err(|e| JsError::new(&e))
}
