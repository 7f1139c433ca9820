//! Canonical JSON interchange format.
//!
//! ```json
//! {
//!   "hyperedges": { "<id>": { "label": "...", "members": ["<node>", ...] } },
//!   "nodes": { "<id>": { "text": "...", "title": "..." } }
//! }
//! ```
//!
//! Object keys are sorted and members are sorted, so equal hypergraphs
//! serialize to equal bytes. `title` is omitted when empty.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{HyperedgeId, Node, NodeId, TextHypergraph};
use crate::error::{Error, Result};

// Field order is the serialized key order: keep it lexicographic.
#[derive(Serialize, Deserialize)]
struct FileRepr {
    hyperedges: BTreeMap<HyperedgeId, FileEdge>,
    nodes: BTreeMap<NodeId, FileNode>,
}

#[derive(Serialize, Deserialize)]
struct FileEdge {
    label: String,
    members: Vec<NodeId>,
}

#[derive(Serialize, Deserialize)]
struct FileNode {
    text: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    title: String,
}

impl TextHypergraph {
    pub fn to_json_bytes(&self) -> Vec<u8> {
        let repr = FileRepr {
            hyperedges: self
                .hyperedges
                .iter()
                .map(|(id, e)| {
                    (
                        id.clone(),
                        FileEdge {
                            label: e.label.clone(),
                            members: e.members.iter().cloned().collect(),
                        },
                    )
                })
                .collect(),
            nodes: self
                .nodes
                .iter()
                .map(|(id, n)| {
                    (
                        id.clone(),
                        FileNode {
                            text: n.text.clone(),
                            title: n.title.clone(),
                        },
                    )
                })
                .collect(),
        };
        let mut out = serde_json::to_vec_pretty(&repr).expect("in-memory serialization");
        out.push(b'\n');
        out
    }

    pub fn from_json_bytes(bytes: &[u8]) -> Result<Self> {
        let repr: FileRepr =
            serde_json::from_slice(bytes).map_err(|e| Error::from_json(e, None))?;

        let mut offenders = Vec::new();
        for id in repr.nodes.keys() {
            if id.as_str().is_empty() {
                offenders.push("empty node id".to_owned());
            }
        }
        for (id, edge) in &repr.hyperedges {
            if id.as_str().is_empty() {
                offenders.push("empty hyperedge id".to_owned());
            }
            for m in &edge.members {
                if !repr.nodes.contains_key(m) {
                    offenders.push(format!("hyperedge `{id}` references unknown node `{m}`"));
                }
            }
        }
        if !offenders.is_empty() {
            return Err(Error::Validation { offenders });
        }

        let mut hot = TextHypergraph::new();
        for (id, n) in repr.nodes {
            hot.add_node(id, Node::titled(n.title, n.text))?;
        }
        for (id, e) in repr.hyperedges {
            hot.add_hyperedge(id, e.label, e.members)?;
        }
        Ok(hot)
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&self.to_json_bytes())?;
        Ok(())
    }

    pub fn read_json<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        Self::from_json_bytes(&buf)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json_bytes(&std::fs::read(path)?)
    }

    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, self.to_json_bytes())?;
        Ok(())
    }
}
