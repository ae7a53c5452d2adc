use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use super::{IdPattern, TermId, TripleStore};
use crate::model::vocab::compact;
use crate::model::{LocalNamespace, Term};

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}

fn node_label(term: &Term, ns: &LocalNamespace) -> String {
    match term {
        Term::Iri(iri) => compact(iri, ns),
        Term::Blank(b) => format!("_:{b}"),
        Term::Literal(lit) => match lit.language() {
            Some(lang) => format!("\"{}\"@{lang}", lit.lexical()),
            None => format!("\"{}\"", lit.lexical()),
        },
    }
}

/// Graphviz rendering of the neighbourhood of `focus` (the whole graph when
/// `None`). Hops ignore edge direction; nodes are numbered in term order.
pub fn export_dot(store: &TripleStore, focus: Option<&Term>, radius: usize, ns: &LocalNamespace) -> String {
    let nodes: BTreeSet<TermId> = match focus {
        None => store.id_triples().flat_map(|[s, _, o]| [s, o]).collect(),
        Some(term) => match store.id(term) {
            Some(id)
                if store.count(IdPattern { s: Some(id), ..Default::default() }) > 0
                    || store.count(IdPattern { o: Some(id), ..Default::default() }) > 0 =>
            {
                neighbourhood(store, id, radius)
            }
            _ => {
                log::warn!("focus {term} is not a node of the graph");
                BTreeSet::new()
            }
        },
    };

    let mut ordered: Vec<TermId> = nodes.iter().copied().collect();
    ordered.sort_by(|a, b| store.term(*a).cmp(store.term(*b)));
    let index: BTreeMap<TermId, usize> = ordered.iter().enumerate().map(|(i, id)| (*id, i)).collect();

    let mut out = String::from("digraph {\n");
    for (i, id) in ordered.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", dot_escape(&node_label(store.term(*id), ns)));
    }
    let mut edges: Vec<(usize, usize, String)> = store
        .id_triples()
        .filter_map(|[s, p, o]| {
            let (a, b) = (index.get(&s)?, index.get(&o)?);
            Some((*a, *b, compact(store.term(p).value(), ns)))
        })
        .collect();
    edges.sort();
    for (a, b, label) in edges {
        let _ = writeln!(out, "  n{a} -> n{b} [label=\"{}\"];", dot_escape(&label));
    }
    out.push_str("}\n");
    out
}

fn neighbourhood(store: &TripleStore, start: TermId, radius: usize) -> BTreeSet<TermId> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((node, depth)) = queue.pop_front() {
        if depth == radius {
            continue;
        }
        let out_edges = store.scan(IdPattern { s: Some(node), ..Default::default() });
        let in_edges = store.scan(IdPattern { o: Some(node), ..Default::default() });
        let next = out_edges.iter().map(|t| t[2]).chain(in_edges.iter().map(|t| t[0]));
        for n in next {
            if seen.insert(n) {
                queue.push_back((n, depth + 1));
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::vocab::DCAT_KEYWORD;
    use crate::model::Triple;

    fn sample() -> (TripleStore, LocalNamespace) {
        let ns = LocalNamespace::default();
        let d = Term::iri(&ns.dataset("d1")).unwrap();
        let kw = Term::iri(DCAT_KEYWORD).unwrap();
        let other = Term::iri(&ns.dataset("d2")).unwrap();
        let triples = vec![
            Triple::new(d.clone(), kw.clone(), Term::literal("death", Some("en"), None).unwrap()).unwrap(),
            Triple::new(other.clone(), kw.clone(), Term::literal("income", Some("en"), None).unwrap()).unwrap(),
        ];
        (TripleStore::load(&triples), ns)
    }

    #[test]
    fn empty_store() {
        assert_eq!(export_dot(&TripleStore::new(), None, 1, &LocalNamespace::default()), "digraph {\n}\n");
    }

    #[test]
    fn radius_zero_is_single_node() {
        let (store, ns) = sample();
        let focus = Term::iri(&ns.dataset("d1")).unwrap();
        let dot = export_dot(&store, Some(&focus), 0, &ns);
        assert_eq!(dot, "digraph {\n  n0 [label=\"local:dataset/d1\"];\n}\n");
    }

    #[test]
    fn radius_one_reaches_keyword() {
        let (store, ns) = sample();
        let focus = Term::iri(&ns.dataset("d1")).unwrap();
        let dot = export_dot(&store, Some(&focus), 1, &ns);
        assert!(dot.contains("\\\"death\\\"@en"));
        assert!(dot.contains("  n0 -> n1 [label=\"dcat:keyword\"];\n"));
        assert!(!dot.contains("income"));
    }

    #[test]
    fn unknown_focus_is_empty() {
        let (store, ns) = sample();
        let focus = Term::iri("http://nowhere.org/x").unwrap();
        assert_eq!(export_dot(&store, Some(&focus), 2, &ns), "digraph {\n}\n");
    }
}
