//! DeepWalk-style node embeddings: uniform random walks plus skip-gram with
//! negative sampling.

mod sgns;
mod table;
mod walks;

use thiserror::Error;

pub use sgns::{sgns_gradients, sgns_loss, sgns_step, sigmoid, train, SgnsConfig, SgnsGradients};
pub use table::{cosine, EmbeddingTable};
pub use walks::{build_walk_corpus, EntityGraph, WalkConfig, WalkCorpus};

use crate::store::TripleStore;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmbedError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("walk corpus has no tokens")]
    EmptyVocabulary,
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("embedding file line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Walks the entity graph of `store` and trains embeddings on the result.
pub fn embed_store(store: &TripleStore, walk: &WalkConfig, sgns: &SgnsConfig) -> Result<EmbeddingTable, EmbedError> {
    let corpus = build_walk_corpus(&EntityGraph::from_store(store), walk)?;
    train(&corpus, sgns)
}
