//! Basic graph pattern evaluation.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{IdPattern, TermId, TripleStore};
use crate::model::{parse_term, vocab, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("malformed variable name {0:?}")]
    BadVariable(String),
    #[error("malformed term {term:?}: {reason}")]
    BadTerm { term: String, reason: String },
    #[error("projected variable ?{0} does not occur in any pattern")]
    UnboundProjection(String),
    #[error("invalid query JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Var(String),
    Term(Term),
}

impl PatternTerm {
    /// Parses `?name`, an N-Triples term, or a known prefixed name (`dcat:keyword`).
    pub fn parse(text: &str) -> Result<Self, QueryError> {
        let text = text.trim();
        if let Some(name) = text.strip_prefix('?') {
            let mut chars = name.chars();
            let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            return if ok {
                Ok(PatternTerm::Var(name.to_string()))
            } else {
                Err(QueryError::BadVariable(text.to_string()))
            };
        }
        if !text.starts_with(['<', '"', '_']) {
            if let Some((prefix, local)) = text.split_once(':') {
                if let Some((_, ns)) = vocab::PREFIXES.iter().find(|(p, _)| *p == prefix) {
                    return Term::iri(&format!("{ns}{local}"))
                        .map(PatternTerm::Term)
                        .map_err(|e| QueryError::BadTerm { term: text.to_string(), reason: e.to_string() });
                }
            }
        }
        parse_term(text)
            .map(PatternTerm::Term)
            .map_err(|e| QueryError::BadTerm { term: text.to_string(), reason: e.message })
    }

    fn var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePattern {
    pub s: PatternTerm,
    pub p: PatternTerm,
    pub o: PatternTerm,
}

impl TriplePattern {
    pub fn new(s: PatternTerm, p: PatternTerm, o: PatternTerm) -> Self {
        TriplePattern { s, p, o }
    }

    fn positions(&self) -> [&PatternTerm; 3] {
        [&self.s, &self.p, &self.o]
    }
}

/// Conjunction of patterns, projected variables, and pairs of variables
/// that must bind different terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BgpQuery {
    pub patterns: Vec<TriplePattern>,
    pub select: Vec<String>,
    pub distinct: Vec<(String, String)>,
}

#[derive(Deserialize)]
struct RawQuery {
    patterns: Vec<[String; 3]>,
    #[serde(default)]
    select: Option<Vec<String>>,
    #[serde(default)]
    distinct: Vec<[String; 2]>,
}

impl BgpQuery {
    /// Builds a query; when `select` is `None` every variable is projected in
    /// first-occurrence order.
    pub fn new(
        patterns: Vec<TriplePattern>,
        select: Option<Vec<String>>,
        distinct: Vec<(String, String)>,
    ) -> Result<Self, QueryError> {
        let mut vars: Vec<String> = Vec::new();
        for p in &patterns {
            for v in p.positions().into_iter().filter_map(PatternTerm::var) {
                if !vars.iter().any(|x| x == v) {
                    vars.push(v.to_string());
                }
            }
        }
        let select = select.unwrap_or_else(|| vars.clone());
        for v in select.iter().chain(distinct.iter().flat_map(|(a, b)| [a, b])) {
            if !vars.contains(v) {
                return Err(QueryError::UnboundProjection(v.clone()));
            }
        }
        Ok(BgpQuery { patterns, select, distinct })
    }

    /// `{"patterns": [["?d", "dcat:keyword", "\"death\"@en"]], "select": ["d"], "distinct": [["d","d2"]]}`
    pub fn from_json(text: &str) -> Result<Self, QueryError> {
        let raw: RawQuery = serde_json::from_str(text).map_err(|e| QueryError::Json(e.to_string()))?;
        Self::from_raw(raw)
    }

    pub fn from_json_value(value: serde_json::Value) -> Result<Self, QueryError> {
        let raw: RawQuery = serde_json::from_value(value).map_err(|e| QueryError::Json(e.to_string()))?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawQuery) -> Result<Self, QueryError> {
        let patterns = raw
            .patterns
            .iter()
            .map(|[s, p, o]| {
                Ok(TriplePattern::new(PatternTerm::parse(s)?, PatternTerm::parse(p)?, PatternTerm::parse(o)?))
            })
            .collect::<Result<Vec<_>, QueryError>>()?;
        let strip = |v: &String| v.trim_start_matches('?').to_string();
        let select = raw.select.map(|s| s.iter().map(strip).collect());
        let distinct = raw.distinct.iter().map(|[a, b]| (strip(a), strip(b))).collect();
        BgpQuery::new(patterns, select, distinct)
    }
}

/// Projected solutions, sorted by term order and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BindingSet {
    pub vars: Vec<String>,
    pub rows: Vec<Vec<Term>>,
}

impl BindingSet {
    /// Rows as JSON objects mapping variable name to N-Triples term text.
    pub fn to_json_rows(&self) -> Vec<serde_json::Map<String, serde_json::Value>> {
        self.rows
            .iter()
            .map(|row| {
                self.vars.iter().zip(row).map(|(v, t)| (v.clone(), serde_json::Value::String(t.to_string()))).collect()
            })
            .collect()
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Const(TermId),
    Var(usize),
}

impl TripleStore {
    /// Natural join of all pattern solutions, projected onto `query.select`.
    pub fn evaluate_bgp(&self, query: &BgpQuery) -> BindingSet {
        let empty = BindingSet { vars: query.select.clone(), rows: Vec::new() };
        let mut var_index: HashMap<&str, usize> = HashMap::new();
        let mut compiled: Vec<[Slot; 3]> = Vec::with_capacity(query.patterns.len());
        for pattern in &query.patterns {
            let mut slots = [Slot::Const(0); 3];
            for (i, pt) in pattern.positions().into_iter().enumerate() {
                slots[i] = match pt {
                    PatternTerm::Var(v) => {
                        let next = var_index.len();
                        Slot::Var(*var_index.entry(v.as_str()).or_insert(next))
                    }
                    PatternTerm::Term(t) => match self.id(t) {
                        Some(id) => Slot::Const(id),
                        None => return empty,
                    },
                };
            }
            compiled.push(slots);
        }

        let order = join_order(self, &compiled);
        let mut binding: Vec<Option<TermId>> = vec![None; var_index.len()];
        let mut solutions: Vec<Vec<Option<TermId>>> = Vec::new();
        self.join(&compiled, &order, 0, &mut binding, &mut solutions);

        let distinct: Vec<(usize, usize)> =
            query.distinct.iter().map(|(a, b)| (var_index[a.as_str()], var_index[b.as_str()])).collect();
        let projection: Vec<usize> = query.select.iter().map(|v| var_index[v.as_str()]).collect();
        let rows: BTreeSet<Vec<Term>> = solutions
            .into_iter()
            .filter(|sol| distinct.iter().all(|&(a, b)| sol[a] != sol[b]))
            .map(|sol| {
                projection.iter().map(|&i| self.term(sol[i].expect("joined variables are bound")).clone()).collect()
            })
            .collect();
        BindingSet { vars: query.select.clone(), rows: rows.into_iter().collect() }
    }

    fn join(
        &self,
        patterns: &[[Slot; 3]],
        order: &[usize],
        depth: usize,
        binding: &mut Vec<Option<TermId>>,
        out: &mut Vec<Vec<Option<TermId>>>,
    ) {
        let Some(&next) = order.get(depth) else {
            out.push(binding.clone());
            return;
        };
        let slots = &patterns[next];
        let resolve = |slot: Slot, binding: &[Option<TermId>]| match slot {
            Slot::Const(id) => Some(id),
            Slot::Var(v) => binding[v],
        };
        let pattern =
            IdPattern { s: resolve(slots[0], binding), p: resolve(slots[1], binding), o: resolve(slots[2], binding) };
        for triple in self.scan(pattern) {
            let mut newly_bound = Vec::new();
            let mut consistent = true;
            for (slot, value) in slots.iter().zip(triple) {
                if let Slot::Var(v) = *slot {
                    match binding[v] {
                        Some(bound) if bound != value => {
                            consistent = false;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            binding[v] = Some(value);
                            newly_bound.push(v);
                        }
                    }
                }
            }
            if consistent {
                self.join(patterns, order, depth + 1, binding, out);
            }
            for v in newly_bound {
                binding[v] = None;
            }
        }
    }
}

/// Greedy order: most bound positions first (counting variables bound by
/// earlier patterns), then smallest constant-only match count.
fn join_order(store: &TripleStore, patterns: &[[Slot; 3]]) -> Vec<usize> {
    let estimates: Vec<usize> = patterns
        .iter()
        .map(|slots| {
            let c = |s: Slot| match s {
                Slot::Const(id) => Some(id),
                Slot::Var(_) => None,
            };
            store.count(IdPattern { s: c(slots[0]), p: c(slots[1]), o: c(slots[2]) })
        })
        .collect();
    let mut bound_vars: BTreeSet<usize> = BTreeSet::new();
    let mut remaining: Vec<usize> = (0..patterns.len()).collect();
    let mut order = Vec::with_capacity(patterns.len());
    while !remaining.is_empty() {
        let (pos, &best) = remaining
            .iter()
            .enumerate()
            .max_by_key(|(_, &i)| {
                let bound = patterns[i]
                    .iter()
                    .filter(|s| match s {
                        Slot::Const(_) => true,
                        Slot::Var(v) => bound_vars.contains(v),
                    })
                    .count();
                (bound, std::cmp::Reverse(estimates[i]), std::cmp::Reverse(i))
            })
            .expect("non-empty");
        remaining.remove(pos);
        for s in &patterns[best] {
            if let Slot::Var(v) = s {
                bound_vars.insert(*v);
            }
        }
        order.push(best);
    }
    order
}
