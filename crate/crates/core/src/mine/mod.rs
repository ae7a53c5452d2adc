//! Closed Horn rule mining over the store's entity graph, scored by support,
//! head coverage, standard confidence and PCA confidence.
//!
//! The search starts from every single-atom head and refines with dangling
//! atoms (one fresh variable) and closing atoms (two existing variables).
//! Support only shrinks under refinement, so pruning on it is exact: the
//! output equals the thresholded set of all closed, connected rules up to
//! `max_len` atoms.

mod eval;
mod graph;
mod rule;

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Term, Triple};
use crate::store::TripleStore;
use eval::{IdAtom, IdRule};
use graph::MiningGraph;

pub use rule::{canonicalize, format_rules, parse_rules, Atom, HornRule, RuleParseError, RuleScores};

/// Which side of the head is assumed functional for PCA confidence.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PcaSide {
    #[default]
    Subject,
    Object,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MiningConfig {
    pub max_len: usize,
    pub min_head_coverage: f64,
    pub min_std_confidence: f64,
    pub min_support: u64,
    pub apply_threshold: f64,
    pub pca_side: PcaSide,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            max_len: 3,
            min_head_coverage: 0.01,
            min_std_confidence: 0.1,
            min_support: 2,
            apply_threshold: 0.9,
            pca_side: PcaSide::Subject,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("max_len must be at least 2, got {0}")]
    MaxLen(usize),
    #[error("{name} must lie in [0, 1], got {value}")]
    Threshold { name: &'static str, value: f64 },
}

impl MiningConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_len < 2 {
            return Err(ConfigError::MaxLen(self.max_len));
        }
        for (name, value) in
            [("min_head_coverage", self.min_head_coverage), ("min_std_confidence", self.min_std_confidence)]
        {
            if !(0.0..=1.0).contains(&value) {
                return Err(ConfigError::Threshold { name, value });
            }
        }
        Ok(())
    }

    fn passes_support(&self, support: u64, head_size: usize) -> bool {
        support >= self.min_support && head_size > 0 && support as f64 / head_size as f64 >= self.min_head_coverage
    }
}

/// Scores a rule against the store. Unknown relations give all-zero scores.
pub fn score_rule(store: &TripleStore, rule: &HornRule, side: PcaSide) -> RuleScores {
    let graph = MiningGraph::from_store(store);
    match IdRule::from_horn(rule, &graph) {
        Some(id_rule) => eval::score(&graph, &id_rule, side),
        None => RuleScores::default(),
    }
}

/// Result of a mining run.
#[derive(Debug, Clone, PartialEq)]
pub struct MiningOutcome {
    pub rules: Vec<HornRule>,
    /// Triples with literal objects, which take no part in mining.
    pub skipped_literal_triples: usize,
}

/// Sorts by PCA confidence (desc), support (desc), canonical text.
pub fn sort_rules(rules: &mut [HornRule]) {
    rules.sort_by(|a, b| {
        b.scores
            .pca_confidence
            .total_cmp(&a.scores.pca_confidence)
            .then(b.scores.support.cmp(&a.scores.support))
            .then_with(|| a.canonical_text().cmp(&b.canonical_text()))
    });
}

pub fn mine_rules(store: &TripleStore, config: &MiningConfig) -> MiningOutcome {
    let graph = MiningGraph::from_store(store);
    let mut seen: HashSet<String> = HashSet::new();
    let mut queue: VecDeque<IdRule> = VecDeque::new();
    let mut out = Vec::new();

    for rel in 0..graph.relations.len() {
        if config.passes_support(graph.facts[rel].len() as u64, graph.facts[rel].len()) {
            queue.push_back(IdRule::head_only(rel));
        }
    }

    while let Some(rule) = queue.pop_front() {
        if !rule.body.is_empty() && rule.open_vars() == 0 {
            let scores = eval::score(&graph, &rule, config.pca_side);
            if config.passes_support(scores.support, graph.facts[rule.head.rel].len())
                && scores.std_confidence >= config.min_std_confidence
            {
                let mut horn = rule.to_horn(&graph);
                horn.scores = scores;
                out.push(horn);
            }
        }
        if rule.len() >= config.max_len {
            continue;
        }
        let remaining_after = config.max_len - rule.len() - 1;
        for candidate in refinements(&rule, graph.relations.len()) {
            // each further atom closes at most two open variables
            if candidate.open_vars() > 2 * remaining_after {
                continue;
            }
            if !seen.insert(candidate.to_horn(&graph).canonical_text()) {
                continue;
            }
            let support = eval::support(&graph, &candidate);
            if config.passes_support(support, graph.facts[candidate.head.rel].len()) {
                queue.push_back(candidate);
            }
        }
    }

    sort_rules(&mut out);
    MiningOutcome { rules: out, skipped_literal_triples: graph.skipped_literals }
}

fn refinements(rule: &IdRule, relations: usize) -> Vec<IdRule> {
    let mut atoms = Vec::new();
    let fresh = rule.vars;
    for rel in 0..relations {
        for a in 0..rule.vars {
            atoms.push(IdAtom { rel, s: a, o: fresh });
            atoms.push(IdAtom { rel, s: fresh, o: a });
            for b in 0..rule.vars {
                if a != b {
                    atoms.push(IdAtom { rel, s: a, o: b });
                }
            }
        }
    }
    atoms
        .into_iter()
        .filter(|atom| !rule.contains_atom(atom))
        .map(|atom| {
            let mut next = rule.clone();
            if atom.s == fresh || atom.o == fresh {
                next.vars += 1;
            }
            next.body.push(atom);
            next
        })
        .collect()
}

/// A head triple produced by a rule, with the rule's canonical text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inference {
    pub triple: Triple,
    pub rule: String,
}

/// Instantiates every rule with `pca_confidence >= threshold` and returns the
/// head triples not already in the store. With `fixpoint`, repeats until no
/// new triple appears.
pub fn apply_rules(store: &TripleStore, rules: &[HornRule], threshold: f64, fixpoint: bool) -> Vec<Inference> {
    let mut graph = MiningGraph::from_store(store);
    let accepted: Vec<(&HornRule, IdRule)> = rules
        .iter()
        .filter(|r| r.scores.pca_confidence >= threshold)
        .filter_map(|r| IdRule::from_horn(r, &graph).map(|id| (r, id)))
        .collect();

    let mut out = Vec::new();
    let mut emitted: HashSet<(usize, u32, u32)> = HashSet::new();
    loop {
        let mut round: Vec<(usize, u32, u32, String)> = Vec::new();
        for (rule, id_rule) in &accepted {
            let mut pairs: Vec<(u32, u32)> = eval::body_pairs(&graph, id_rule).into_iter().collect();
            pairs.sort_by(|a, b| (store.term(a.0), store.term(a.1)).cmp(&(store.term(b.0), store.term(b.1))));
            let rel = id_rule.head.rel;
            for (x, y) in pairs {
                if graph.facts[rel].set.contains(&(x, y)) || !emitted.insert((rel, x, y)) {
                    continue;
                }
                round.push((rel, x, y, rule.canonical_text()));
            }
        }
        if round.is_empty() {
            break;
        }
        for (rel, x, y, text) in round {
            graph.add_fact(rel, x, y);
            let triple =
                Triple::new(store.term(x).clone(), Term::Iri(graph.relations[rel].clone()), store.term(y).clone())
                    .expect("rule heads instantiate entity triples");
            out.push(Inference { triple, rule: text });
        }
        if !fixpoint {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::vocab::{DCT_HAS_PART, DCT_IS_PART_OF};

    fn iri(s: &str) -> Term {
        Term::iri(s).unwrap()
    }

    fn node(s: &str) -> Term {
        iri(&format!("http://ex.org/{s}"))
    }

    pub(crate) fn mirror(pairs: usize, gap: bool) -> TripleStore {
        let mut triples = Vec::new();
        for i in 0..pairs {
            let (b, a) = (node(&format!("b{i}")), node(&format!("a{i}")));
            triples.push(Triple::new(b.clone(), iri(DCT_HAS_PART), a.clone()).unwrap());
            if !(gap && i == 0) {
                triples.push(Triple::new(a, iri(DCT_IS_PART_OF), b).unwrap());
            }
        }
        TripleStore::load(&triples)
    }

    fn inverse_rule() -> HornRule {
        HornRule::new(vec![Atom::new(DCT_HAS_PART, "y", "x")], Atom::new(DCT_IS_PART_OF, "x", "y"))
    }

    #[test]
    fn mirror_scores_are_perfect() {
        let s = score_rule(&mirror(10, false), &inverse_rule(), PcaSide::Subject);
        assert_eq!(s, RuleScores { support: 10, head_coverage: 1.0, std_confidence: 1.0, pca_confidence: 1.0 });
    }

    #[test]
    fn small_counting_example() {
        let p = |s: &str, o: &str| Triple::new(node(s), iri("http://ex.org/p"), node(o)).unwrap();
        let q = |s: &str, o: &str| Triple::new(node(s), iri("http://ex.org/q"), node(o)).unwrap();
        let store = TripleStore::load(&[p("a", "b"), p("c", "d"), q("b", "a")]);
        let rule = HornRule::new(vec![Atom::new("http://ex.org/p", "Y", "X")], Atom::new("http://ex.org/q", "X", "Y"));
        let s = score_rule(&store, &rule, PcaSide::Subject);
        assert_eq!(s.support, 1);
        assert_eq!(s.std_confidence, 0.5);
        assert_eq!(s.pca_confidence, 1.0);
        assert_eq!(s.head_coverage, 1.0);
    }

    #[test]
    fn absent_head_relation_scores_zero() {
        let rule = HornRule::new(vec![Atom::new(DCT_HAS_PART, "y", "x")], Atom::new("http://ex.org/nothing", "x", "y"));
        assert_eq!(score_rule(&mirror(3, false), &rule, PcaSide::Subject), RuleScores::default());
    }

    #[test]
    fn mirror_mining_finds_both_inverses() {
        let outcome = mine_rules(&mirror(10, false), &MiningConfig::default());
        let texts: Vec<String> = outcome.rules.iter().map(|r| r.canonical_text()).collect();
        assert_eq!(
            texts,
            vec![
                "?b <http://purl.org/dc/terms/hasPart> ?a => ?a <http://purl.org/dc/terms/isPartOf> ?b",
                "?b <http://purl.org/dc/terms/isPartOf> ?a => ?a <http://purl.org/dc/terms/hasPart> ?b",
            ]
        );
        assert!(outcome.rules.iter().all(|r| r.scores.pca_confidence == 1.0 && r.scores.support == 10));
    }

    #[test]
    fn empty_store_mines_nothing() {
        assert!(mine_rules(&TripleStore::new(), &MiningConfig::default()).rules.is_empty());
    }

    #[test]
    fn gap_is_inferred_and_closed() {
        let store = mirror(10, true);
        let mut rule = inverse_rule();
        rule.scores = score_rule(&store, &rule, PcaSide::Subject);
        assert_eq!(rule.scores.support, 9);
        assert_eq!(rule.scores.std_confidence, 0.9);
        let inferred = apply_rules(&store, std::slice::from_ref(&rule), 0.9, false);
        assert_eq!(inferred.len(), 1);
        assert_eq!(inferred[0].triple, Triple::new(node("a0"), iri(DCT_IS_PART_OF), node("b0")).unwrap());
        assert_eq!(inferred[0].rule, rule.canonical_text());

        assert!(apply_rules(&store, std::slice::from_ref(&rule), 1.1, false).is_empty());

        let mut closed = store.clone();
        closed.insert(&inferred[0].triple);
        let rescored = score_rule(&closed, &rule, PcaSide::Subject);
        assert_eq!(rescored.pca_confidence, 1.0);
        assert_eq!(rescored.std_confidence, 1.0);
    }

    #[test]
    fn fixpoint_chains_rules() {
        // p(x,y) => q(x,y) and q(x,y) => r(x,y): one pass yields q only.
        let store = TripleStore::load(&[
            Triple::new(node("a"), iri("http://ex.org/p"), node("b")).unwrap(),
            Triple::new(node("c"), iri("http://ex.org/r"), node("d")).unwrap(),
            Triple::new(node("c"), iri("http://ex.org/q"), node("d")).unwrap(),
        ]);
        let mut r1 =
            HornRule::new(vec![Atom::new("http://ex.org/p", "x", "y")], Atom::new("http://ex.org/q", "x", "y"));
        let mut r2 =
            HornRule::new(vec![Atom::new("http://ex.org/q", "x", "y")], Atom::new("http://ex.org/r", "x", "y"));
        r1.scores.pca_confidence = 1.0;
        r2.scores.pca_confidence = 1.0;
        let rules = [r1, r2];
        assert_eq!(apply_rules(&store, &rules, 0.9, false).len(), 1);
        assert_eq!(apply_rules(&store, &rules, 0.9, true).len(), 2);
    }

    #[test]
    fn config_validation() {
        assert!(MiningConfig::default().validate().is_ok());
        assert!(MiningConfig { max_len: 1, ..Default::default() }.validate().is_err());
        assert!(MiningConfig { min_head_coverage: 1.5, ..Default::default() }.validate().is_err());
    }
}
