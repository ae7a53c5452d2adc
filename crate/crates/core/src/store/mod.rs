//! Embedded triple store: a term dictionary plus three sorted id indexes.

mod dot;
mod query;
mod reports;

use std::collections::{BTreeSet, HashMap};
use std::ops::Bound;

use crate::model::{serialize_ntriples, Term, Triple};

pub use dot::export_dot;
pub use query::{BgpQuery, BindingSet, PatternTerm, QueryError, TriplePattern};
pub use reports::{multi_category_report, shared_variable_report, SharedVariables};

pub type TermId = u32;
pub type IdTriple = [TermId; 3];

/// Which sorted index a scan reads from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    Spo,
    Pos,
    Osp,
}

/// Id-level pattern; `None` positions are unbound.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IdPattern {
    pub s: Option<TermId>,
    pub p: Option<TermId>,
    pub o: Option<TermId>,
}

impl IdPattern {
    /// Index chosen by bound positions: s-bound → SPO, p-bound → POS, o-only → OSP.
    pub fn preferred_index(&self) -> IndexKind {
        if self.s.is_some() {
            IndexKind::Spo
        } else if self.p.is_some() {
            IndexKind::Pos
        } else if self.o.is_some() {
            IndexKind::Osp
        } else {
            IndexKind::Spo
        }
    }

    fn matches(&self, t: &IdTriple) -> bool {
        self.s.is_none_or(|s| s == t[0]) && self.p.is_none_or(|p| p == t[1]) && self.o.is_none_or(|o| o == t[2])
    }
}

#[derive(Debug, Clone, Default)]
pub struct TripleStore {
    terms: Vec<Term>,
    ids: HashMap<Term, TermId>,
    spo: BTreeSet<IdTriple>,
    pos: BTreeSet<IdTriple>,
    osp: BTreeSet<IdTriple>,
}

impl TripleStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Loads triples, dropping duplicates.
    pub fn load<'a, I>(triples: I) -> Self
    where
        I: IntoIterator<Item = &'a Triple>,
    {
        let mut store = TripleStore::new();
        for t in triples {
            store.insert(t);
        }
        store
    }

    fn intern(&mut self, term: &Term) -> TermId {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = TermId::try_from(self.terms.len()).expect("term dictionary overflow");
        self.terms.push(term.clone());
        self.ids.insert(term.clone(), id);
        id
    }

    /// Returns true when the triple was not already present.
    pub fn insert(&mut self, triple: &Triple) -> bool {
        let s = self.intern(triple.subject());
        let p = self.intern(triple.predicate());
        let o = self.intern(triple.object());
        if !self.spo.insert([s, p, o]) {
            return false;
        }
        self.pos.insert([p, o, s]);
        self.osp.insert([o, s, p]);
        true
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    pub fn id(&self, term: &Term) -> Option<TermId> {
        self.ids.get(term).copied()
    }

    pub fn term(&self, id: TermId) -> &Term {
        &self.terms[id as usize]
    }

    /// Number of distinct terms in the dictionary.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        match (self.id(triple.subject()), self.id(triple.predicate()), self.id(triple.object())) {
            (Some(s), Some(p), Some(o)) => self.spo.contains(&[s, p, o]),
            _ => false,
        }
    }

    pub fn contains_ids(&self, t: IdTriple) -> bool {
        self.spo.contains(&t)
    }

    pub fn resolve(&self, t: IdTriple) -> Triple {
        Triple::new(self.term(t[0]).clone(), self.term(t[1]).clone(), self.term(t[2]).clone())
            .expect("stored triples are valid")
    }

    /// All id triples in SPO order.
    pub fn id_triples(&self) -> impl Iterator<Item = IdTriple> + '_ {
        self.spo.iter().copied()
    }

    /// All triples in SPO id order.
    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().map(|t| self.resolve(*t))
    }

    pub fn to_ntriples(&self) -> String {
        let triples: Vec<Triple> = self.triples().collect();
        serialize_ntriples(&triples)
    }

    /// Scans `index`, returning matching triples as `[s, p, o]` in that index's order.
    pub fn scan_with(&self, pattern: IdPattern, index: IndexKind) -> Vec<IdTriple> {
        // Leading bound positions of the index key form the range prefix.
        let (set, key): (&BTreeSet<IdTriple>, [Option<TermId>; 3]) = match index {
            IndexKind::Spo => (&self.spo, [pattern.s, pattern.p, pattern.o]),
            IndexKind::Pos => (&self.pos, [pattern.p, pattern.o, pattern.s]),
            IndexKind::Osp => (&self.osp, [pattern.o, pattern.s, pattern.p]),
        };
        let mut lo = [0; 3];
        let mut hi = [TermId::MAX; 3];
        for (i, k) in key.iter().enumerate() {
            match k {
                Some(v) => {
                    lo[i] = *v;
                    hi[i] = *v;
                }
                None => break,
            }
        }
        set.range((Bound::Included(lo), Bound::Included(hi)))
            .map(|k| match index {
                IndexKind::Spo => *k,
                IndexKind::Pos => [k[2], k[0], k[1]],
                IndexKind::Osp => [k[1], k[2], k[0]],
            })
            .filter(|t| pattern.matches(t))
            .collect()
    }

    /// Scans the index chosen by the pattern's bound positions.
    pub fn scan(&self, pattern: IdPattern) -> Vec<IdTriple> {
        self.scan_with(pattern, pattern.preferred_index())
    }

    /// Number of triples matching the pattern.
    pub fn count(&self, pattern: IdPattern) -> usize {
        self.scan(pattern).len()
    }

    /// Stored triples unifying with the pattern (`None` = wildcard), in
    /// ascending id order of the index used.
    pub fn match_pattern(&self, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> Vec<Triple> {
        let lookup = |t: Option<&Term>| match t {
            None => Some(None),
            Some(term) => self.id(term).map(Some),
        };
        let (Some(s), Some(p), Some(o)) = (lookup(s), lookup(p), lookup(o)) else {
            return Vec::new();
        };
        self.scan(IdPattern { s, p, o }).into_iter().map(|t| self.resolve(t)).collect()
    }

    /// Distinct subjects/objects that are IRIs or blank nodes, sorted by term.
    pub fn resource_ids(&self) -> Vec<TermId> {
        let mut seen = BTreeSet::new();
        for t in &self.spo {
            seen.insert(t[0]);
            if !self.term(t[2]).is_literal() {
                seen.insert(t[2]);
            }
        }
        let mut ids: Vec<TermId> = seen.into_iter().collect();
        ids.sort_by(|a, b| self.term(*a).cmp(self.term(*b)));
        ids
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::vocab::DCT_HAS_PART;

    fn iri(s: &str) -> Term {
        Term::iri(&format!("http://ex.org/{s}")).unwrap()
    }

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(iri(s), iri(p), iri(o)).unwrap()
    }

    #[test]
    fn duplicates_collapse() {
        let a = t("a", "p", "b");
        let store = TripleStore::load([&a, &a]);
        assert_eq!(store.len(), 1);
    }

    #[test]
    fn fully_bound_and_unknown_patterns() {
        let store = TripleStore::load(&[t("a", "p", "b"), t("a", "q", "c"), t("d", "p", "b")]);
        let hit = store.match_pattern(Some(&iri("a")), Some(&iri("p")), Some(&iri("b")));
        assert_eq!(hit.len(), 1);
        assert!(store.match_pattern(Some(&iri("zzz")), None, None).is_empty());
        assert_eq!(store.match_pattern(None, Some(&iri("p")), None).len(), 2);
        assert_eq!(store.match_pattern(None, None, Some(&iri("b"))).len(), 2);
        assert_eq!(store.match_pattern(Some(&iri("a")), None, Some(&iri("c"))).len(), 1);
    }

    #[test]
    fn has_part_edges() {
        let has_part = Term::iri(DCT_HAS_PART).unwrap();
        let triples: Vec<Triple> = (0..4)
            .map(|i| Triple::new(iri("cat"), has_part.clone(), iri(&format!("d{i}"))).unwrap())
            .chain([t("cat", "title", "x")])
            .collect();
        let store = TripleStore::load(&triples);
        assert_eq!(store.match_pattern(None, Some(&has_part), None).len(), 4);
    }

    #[test]
    fn every_index_agrees() {
        let store = TripleStore::load(&[t("a", "p", "b"), t("a", "q", "b"), t("b", "p", "a"), t("c", "p", "b")]);
        let id = |s: &str| store.id(&iri(s));
        let pat = IdPattern { s: None, p: id("p"), o: id("b") };
        let mut results: Vec<Vec<IdTriple>> = [IndexKind::Spo, IndexKind::Pos, IndexKind::Osp]
            .iter()
            .map(|k| {
                let mut v = store.scan_with(pat, *k);
                v.sort();
                v
            })
            .collect();
        let first = results.remove(0);
        assert_eq!(first.len(), 2);
        assert!(results.iter().all(|r| *r == first));
    }
}
