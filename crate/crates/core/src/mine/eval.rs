//! Id-level rule representation and the counting routines behind the four scores.

use std::collections::HashSet;

use super::graph::MiningGraph;
use super::rule::{Atom, HornRule, RuleScores};
use super::PcaSide;
use crate::store::TermId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct IdAtom {
    pub rel: usize,
    pub s: usize,
    pub o: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct IdRule {
    pub head: IdAtom,
    pub body: Vec<IdAtom>,
    pub vars: usize,
}

impl IdRule {
    pub fn head_only(rel: usize) -> Self {
        IdRule { head: IdAtom { rel, s: 0, o: 1 }, body: Vec::new(), vars: 2 }
    }

    pub fn len(&self) -> usize {
        self.body.len() + 1
    }

    /// Number of variables that occur in exactly one atom.
    pub fn open_vars(&self) -> usize {
        let mut counts = vec![0usize; self.vars];
        for a in self.body.iter().chain([&self.head]) {
            counts[a.s] += 1;
            counts[a.o] += 1;
        }
        counts.iter().filter(|&&c| c == 1).count()
    }

    pub fn contains_atom(&self, atom: &IdAtom) -> bool {
        self.head == *atom || self.body.contains(atom)
    }

    pub fn to_horn(&self, graph: &MiningGraph) -> HornRule {
        let atom = |a: &IdAtom| Atom::new(&graph.relations[a.rel], &format!("v{}", a.s), &format!("v{}", a.o));
        HornRule::new(self.body.iter().map(atom).collect(), atom(&self.head))
    }

    /// Maps a named rule onto relation ids; `None` when a relation is unknown.
    pub fn from_horn(rule: &HornRule, graph: &MiningGraph) -> Option<IdRule> {
        let mut names: Vec<&str> = Vec::new();
        let mut atoms = Vec::with_capacity(rule.body.len() + 1);
        for a in std::iter::once(&rule.head).chain(&rule.body) {
            let rel = *graph.index.get(&a.relation)?;
            let s = var_slot(&mut names, &a.subject);
            let o = var_slot(&mut names, &a.object);
            atoms.push(IdAtom { rel, s, o });
        }
        let head = atoms.remove(0);
        Some(IdRule { head, body: atoms, vars: names.len() })
    }
}

fn var_slot<'a>(names: &mut Vec<&'a str>, name: &'a str) -> usize {
    match names.iter().position(|x| *x == name) {
        Some(i) => i,
        None => {
            names.push(name);
            names.len() - 1
        }
    }
}

fn bound_count(atom: &IdAtom, binding: &[Option<TermId>]) -> usize {
    binding[atom.s].is_some() as usize + binding[atom.o].is_some() as usize
}

fn pick_atom(atoms: &[IdAtom], binding: &[Option<TermId>]) -> usize {
    let mut best = 0;
    for (i, a) in atoms.iter().enumerate() {
        if bound_count(a, binding) > bound_count(&atoms[best], binding) {
            best = i;
        }
    }
    best
}

/// Calls `visit` for every extension of `binding` that satisfies `atom`.
/// `visit` returns true to stop early; the return value reports that.
fn for_each_match(
    graph: &MiningGraph,
    atom: &IdAtom,
    binding: &mut [Option<TermId>],
    visit: &mut dyn FnMut(&mut [Option<TermId>]) -> bool,
) -> bool {
    let facts = &graph.facts[atom.rel];
    match (binding[atom.s], binding[atom.o]) {
        (Some(s), Some(o)) => facts.set.contains(&(s, o)) && visit(binding),
        (Some(s), None) => {
            let Some(objects) = facts.by_subject.get(&s) else {
                return false;
            };
            for &o in objects {
                binding[atom.o] = Some(o);
                let stop = visit(binding);
                binding[atom.o] = None;
                if stop {
                    return true;
                }
            }
            false
        }
        (None, Some(o)) => {
            let Some(subjects) = facts.by_object.get(&o) else {
                return false;
            };
            for &s in subjects {
                binding[atom.s] = Some(s);
                let stop = visit(binding);
                binding[atom.s] = None;
                if stop {
                    return true;
                }
            }
            false
        }
        (None, None) => {
            for &(s, o) in &facts.pairs {
                binding[atom.s] = Some(s);
                binding[atom.o] = Some(o);
                let stop = visit(binding);
                binding[atom.s] = None;
                binding[atom.o] = None;
                if stop {
                    return true;
                }
            }
            false
        }
    }
}

/// Whether the atoms have at least one instantiation extending `binding`.
pub(crate) fn satisfiable(graph: &MiningGraph, atoms: &[IdAtom], binding: &mut [Option<TermId>]) -> bool {
    if atoms.is_empty() {
        return true;
    }
    let i = pick_atom(atoms, binding);
    let mut rest = atoms.to_vec();
    let atom = rest.swap_remove(i);
    for_each_match(graph, &atom, binding, &mut |b| satisfiable(graph, &rest, b))
}

/// Distinct (x, y) bindings of the head variables for which the body holds.
pub(crate) fn body_pairs(graph: &MiningGraph, rule: &IdRule) -> HashSet<(TermId, TermId)> {
    let mut out = HashSet::new();
    let mut binding = vec![None; rule.vars];
    collect_pairs(graph, rule.head.s, rule.head.o, &rule.body, &mut binding, &mut out);
    out
}

fn collect_pairs(
    graph: &MiningGraph,
    x: usize,
    y: usize,
    atoms: &[IdAtom],
    binding: &mut [Option<TermId>],
    out: &mut HashSet<(TermId, TermId)>,
) {
    if let (Some(a), Some(b)) = (binding[x], binding[y]) {
        if !out.contains(&(a, b)) && satisfiable(graph, atoms, binding) {
            out.insert((a, b));
        }
        return;
    }
    if atoms.is_empty() {
        return;
    }
    let i = pick_atom(atoms, binding);
    let mut rest = atoms.to_vec();
    let atom = rest.swap_remove(i);
    for_each_match(graph, &atom, binding, &mut |b| {
        collect_pairs(graph, x, y, &rest, b, out);
        false
    });
}

/// Head facts whose instantiation also satisfies the body.
pub(crate) fn support(graph: &MiningGraph, rule: &IdRule) -> u64 {
    let mut binding = vec![None; rule.vars];
    let mut count = 0;
    for &(a, b) in &graph.facts[rule.head.rel].pairs {
        binding[rule.head.s] = Some(a);
        binding[rule.head.o] = Some(b);
        if satisfiable(graph, &rule.body, &mut binding) {
            count += 1;
        }
    }
    count
}

fn ratio(num: u64, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub(crate) fn score(graph: &MiningGraph, rule: &IdRule, side: PcaSide) -> RuleScores {
    let head = &graph.facts[rule.head.rel];
    let support = support(graph, rule);
    let pairs = body_pairs(graph, rule);
    let pca_den = pairs
        .iter()
        .filter(|(x, y)| match side {
            PcaSide::Subject => head.by_subject.contains_key(x),
            PcaSide::Object => head.by_object.contains_key(y),
        })
        .count();
    RuleScores {
        support,
        head_coverage: ratio(support, head.len()),
        std_confidence: ratio(support, pairs.len()),
        pca_confidence: ratio(support, pca_den),
    }
}
