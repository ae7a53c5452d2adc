//! Pipeline driver, HTTP API and command line for the dataset-metadata
//! knowledge graph.

pub mod api;
pub mod catalog;
pub mod cli;
pub mod config;
pub mod net;
pub mod pipeline;
pub mod report;
pub mod service;
