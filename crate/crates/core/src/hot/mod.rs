//! The hypergraph-of-text data model.
//!
//! A [`TextHypergraph`] holds documents as nodes and semantic groups as
//! hyperedges. Both carry text: nodes their document text (and an optional
//! title), hyperedges a label. Members of a hyperedge are a set, so a node
//! appears at most once per edge.

mod graph;
mod io;

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use graph::{
    induced_adjacency, shortest_distances, Distance, DistanceMatrix, IncidenceIndex, UNREACHABLE,
};

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }

        impl PartialEq<str> for $name {
            fn eq(&self, other: &str) -> bool {
                self.0 == other
            }
        }

        impl PartialEq<&str> for $name {
            fn eq(&self, other: &&str) -> bool {
                self.0 == *other
            }
        }
    };
}

string_id!(
    /// Identifier of a document node.
    NodeId
);
string_id!(
    /// Identifier of a hyperedge.
    HyperedgeId
);

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Node {
    pub title: String,
    pub text: String,
}

impl Node {
    pub fn new(text: impl Into<String>) -> Self {
        Node {
            title: String::new(),
            text: text.into(),
        }
    }

    pub fn titled(title: impl Into<String>, text: impl Into<String>) -> Self {
        Node {
            title: title.into(),
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    pub label: String,
    members: BTreeSet<NodeId>,
}

impl Hyperedge {
    pub fn members(&self) -> &BTreeSet<NodeId> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, node: &str) -> bool {
        self.members.contains(node)
    }
}

/// A hypergraph whose nodes and hyperedges carry text.
///
/// Built incrementally with [`add_node`](Self::add_node) and
/// [`add_hyperedge`](Self::add_hyperedge), then shared read-only. Every
/// hyperedge member is guaranteed to be a node of the hypergraph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TextHypergraph {
    nodes: BTreeMap<NodeId, Node>,
    hyperedges: BTreeMap<HyperedgeId, Hyperedge>,
}

impl TextHypergraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, id: impl Into<NodeId>, node: Node) -> Result<()> {
        let id = id.into();
        if id.as_str().is_empty() {
            return Err(Error::input("node id must be non-empty"));
        }
        if self.nodes.contains_key(&id) {
            return Err(Error::DuplicateId(id.0));
        }
        self.nodes.insert(id, node);
        Ok(())
    }

    /// Adds a hyperedge. Repeated members collapse; members that are not
    /// nodes of the hypergraph are rejected.
    pub fn add_hyperedge<I, M>(
        &mut self,
        id: impl Into<HyperedgeId>,
        label: impl Into<String>,
        members: I,
    ) -> Result<()>
    where
        I: IntoIterator<Item = M>,
        M: Into<NodeId>,
    {
        let id = id.into();
        if id.as_str().is_empty() {
            return Err(Error::input("hyperedge id must be non-empty"));
        }
        if self.hyperedges.contains_key(&id) {
            return Err(Error::DuplicateId(id.0));
        }
        let members: BTreeSet<NodeId> = members.into_iter().map(Into::into).collect();
        let dangling: Vec<String> = members
            .iter()
            .filter(|m| !self.nodes.contains_key(*m))
            .map(|m| format!("hyperedge `{id}` references unknown node `{m}`"))
            .collect();
        if !dangling.is_empty() {
            return Err(Error::Validation {
                offenders: dangling,
            });
        }
        self.hyperedges.insert(
            id,
            Hyperedge {
                label: label.into(),
                members,
            },
        );
        Ok(())
    }

    /// Replaces the text payload of an existing node. Returns false when
    /// the node does not exist.
    pub fn set_node(&mut self, id: &str, node: Node) -> bool {
        match self.nodes.get_mut(id) {
            Some(slot) => {
                *slot = node;
                true
            }
            None => false,
        }
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn hyperedge(&self, id: &str) -> Option<&Hyperedge> {
        self.hyperedges.get(id)
    }

    pub fn contains_node(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    /// Nodes in id order.
    pub fn nodes(&self) -> impl ExactSizeIterator<Item = (&NodeId, &Node)> {
        self.nodes.iter()
    }

    /// Hyperedges in id order.
    pub fn hyperedges(&self) -> impl ExactSizeIterator<Item = (&HyperedgeId, &Hyperedge)> {
        self.hyperedges.iter()
    }

    pub fn node_ids(&self) -> impl ExactSizeIterator<Item = &NodeId> {
        self.nodes.keys()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn hyperedge_count(&self) -> usize {
        self.hyperedges.len()
    }

    /// Copy with only the hyperedges of at least `min_size` members. Nodes
    /// are kept even if that leaves them isolated.
    pub fn prune_by_size(&self, min_size: usize) -> Result<Self> {
        if min_size == 0 {
            return Err(Error::input("min_size must be at least 1"));
        }
        Ok(TextHypergraph {
            nodes: self.nodes.clone(),
            hyperedges: self
                .hyperedges
                .iter()
                .filter(|(_, e)| e.len() >= min_size)
                .map(|(id, e)| (id.clone(), e.clone()))
                .collect(),
        })
    }

    /// Copy carrying the same structure with every hyperedge label
    /// rewritten by `f`.
    pub fn relabel(&self, mut f: impl FnMut(&HyperedgeId, &Hyperedge) -> String) -> Self {
        let mut out = self.clone();
        for (id, edge) in out.hyperedges.iter_mut() {
            edge.label = f(id, &self.hyperedges[id]);
        }
        out
    }
}
