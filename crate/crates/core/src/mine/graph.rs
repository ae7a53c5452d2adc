use std::collections::{HashMap, HashSet};

use crate::store::{TermId, TripleStore};

#[derive(Debug, Default)]
pub(crate) struct RelationFacts {
    pub pairs: Vec<(TermId, TermId)>,
    pub set: HashSet<(TermId, TermId)>,
    pub by_subject: HashMap<TermId, Vec<TermId>>,
    pub by_object: HashMap<TermId, Vec<TermId>>,
}

impl RelationFacts {
    fn push(&mut self, s: TermId, o: TermId) {
        if self.set.insert((s, o)) {
            self.pairs.push((s, o));
            self.by_subject.entry(s).or_default().push(o);
            self.by_object.entry(o).or_default().push(s);
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }
}

/// Per-relation fact indexes over the entity part of a store (literal objects excluded).
#[derive(Debug, Default)]
pub(crate) struct MiningGraph {
    pub relations: Vec<String>,
    pub facts: Vec<RelationFacts>,
    pub index: HashMap<String, usize>,
    pub skipped_literals: usize,
}

impl MiningGraph {
    pub fn from_store(store: &TripleStore) -> Self {
        let mut by_relation: HashMap<TermId, Vec<(TermId, TermId)>> = HashMap::new();
        let mut skipped = 0;
        for [s, p, o] in store.id_triples() {
            if store.term(o).is_literal() {
                skipped += 1;
                continue;
            }
            by_relation.entry(p).or_default().push((s, o));
        }
        let mut relations: Vec<(String, Vec<(TermId, TermId)>)> =
            by_relation.into_iter().map(|(p, pairs)| (store.term(p).value().to_string(), pairs)).collect();
        relations.sort_by(|a, b| a.0.cmp(&b.0));

        let mut graph = MiningGraph { skipped_literals: skipped, ..Default::default() };
        for (iri, pairs) in relations {
            let mut facts = RelationFacts::default();
            for (s, o) in pairs {
                facts.push(s, o);
            }
            graph.index.insert(iri.clone(), graph.relations.len());
            graph.relations.push(iri);
            graph.facts.push(facts);
        }
        graph
    }

    pub fn add_fact(&mut self, relation: usize, s: TermId, o: TermId) {
        self.facts[relation].push(s, o);
    }
}
