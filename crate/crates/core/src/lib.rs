//! Building blocks for turning dataset-description documents into a
//! queryable DCAT/DCT knowledge graph and enriching it.
//!
//! The pipeline runs `ingest` → `translate` → `extract` → `mapping` →
//! `store`, after which `mine` proposes Horn rules and `embed` computes
//! node similarity over the loaded graph.

pub mod embed;
pub mod extract;
pub mod ingest;
pub mod mapping;
pub mod mine;
pub mod model;
pub mod store;
pub mod translate;
