//! Hypergraph construction methods.

pub mod allwords;
pub mod llm;
pub mod topics;
pub mod twostep;

pub use topics::Level;
