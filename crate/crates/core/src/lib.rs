//! Hypergraphs of text: documents as nodes, labelled semantic groups as
//! hyperedges.
//!
//! The crate covers corpus ingestion and TF-IDF statistics ([`corpus`]),
//! three families of hypergraph construction ([`construct`]), pluggable
//! LLM and embedding backends ([`provider`]) and the hop-distance
//! navigability metrics used to compare constructions ([`eval`]).

pub mod construct;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod hot;
pub mod provider;

pub use error::{Error, ProviderError, Result};
pub use eval::{EvalReport, RandomSets, RelevanceSets};
pub use hot::{Hyperedge, HyperedgeId, Node, NodeId, TextHypergraph};
