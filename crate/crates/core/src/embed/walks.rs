use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EmbedError;
use crate::model::Term;
use crate::store::TripleStore;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct WalkConfig {
    pub walks_per_node: usize,
    /// Number of nodes in a walk, start node included.
    pub walk_length: usize,
    pub window: usize,
    pub seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig { walks_per_node: 10, walk_length: 8, window: 2, seed: 7 }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<(), EmbedError> {
        if self.walks_per_node == 0 || self.walk_length == 0 || self.window == 0 {
            return Err(EmbedError::Config("walks_per_node, walk_length and window must be positive".into()));
        }
        if self.window >= self.walk_length {
            return Err(EmbedError::Config("window must be smaller than walk_length".into()));
        }
        Ok(())
    }
}

/// Undirected graph over the non-literal terms of a store.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EntityGraph {
    pub nodes: Vec<Term>,
    /// Sorted, distinct neighbor indexes per node.
    pub neighbors: Vec<Vec<u32>>,
}

impl EntityGraph {
    pub fn from_store(store: &TripleStore) -> Self {
        let ids = store.resource_ids();
        let index: std::collections::HashMap<u32, u32> =
            ids.iter().enumerate().map(|(i, &id)| (id, i as u32)).collect();
        let mut adj: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); ids.len()];
        for [s, _, o] in store.id_triples() {
            let (Some(&a), Some(&b)) = (index.get(&s), index.get(&o)) else {
                continue;
            };
            adj[a as usize].insert(b);
            adj[b as usize].insert(a);
        }
        EntityGraph {
            nodes: ids.iter().map(|&id| store.term(id).clone()).collect(),
            neighbors: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    pub fn from_edges(nodes: Vec<Term>, edges: &[(u32, u32)]) -> Self {
        let mut adj: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); nodes.len()];
        for &(a, b) in edges {
            adj[a as usize].insert(b);
            adj[b as usize].insert(a);
        }
        EntityGraph { nodes, neighbors: adj.into_iter().map(|s| s.into_iter().collect()).collect() }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct WalkCorpus {
    pub nodes: Vec<Term>,
    pub walks: Vec<Vec<u32>>,
    /// Context window training should use.
    pub window: usize,
}

impl WalkCorpus {
    pub fn token_count(&self) -> usize {
        self.walks.iter().map(Vec::len).sum()
    }
}

/// Uniform random walks from every node. Each node draws from its own PRNG
/// stream derived from `(seed, node)`, so walks do not depend on visiting order.
pub fn build_walk_corpus(graph: &EntityGraph, config: &WalkConfig) -> Result<WalkCorpus, EmbedError> {
    config.validate()?;
    let mut walks = Vec::with_capacity(graph.nodes.len() * config.walks_per_node);
    for start in 0..graph.nodes.len() {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(start as u64);
        for _ in 0..config.walks_per_node {
            let mut walk = vec![start as u32];
            let mut at = start;
            while walk.len() < config.walk_length {
                let next = &graph.neighbors[at];
                if next.is_empty() {
                    break;
                }
                let step = next[rng.random_range(0..next.len())];
                walk.push(step);
                at = step as usize;
            }
            walks.push(walk);
        }
    }
    Ok(WalkCorpus { nodes: graph.nodes.clone(), walks, window: config.window })
}
