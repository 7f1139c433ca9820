//! Induced-graph view of a hypergraph and hop distances over it.
//!
//! Two nodes are adjacent when some hyperedge contains both. Traversal walks
//! node -> hyperedge -> node without expanding hyperedges into cliques, and
//! each such step is one hop.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;

use super::{NodeId, TextHypergraph};
use crate::error::{Error, Result};

/// Marker for "no path" in raw distance rows.
pub const UNREACHABLE: u32 = u32::MAX;

/// Dense integer incidence structure for traversal.
#[derive(Debug, Clone)]
pub struct IncidenceIndex {
    ids: Vec<NodeId>,
    position: HashMap<NodeId, u32>,
    node_edges: Vec<Vec<u32>>,
    edge_nodes: Vec<Vec<u32>>,
}

impl IncidenceIndex {
    pub fn new(hot: &TextHypergraph) -> Self {
        let ids: Vec<NodeId> = hot.node_ids().cloned().collect();
        let position: HashMap<NodeId, u32> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i as u32))
            .collect();
        let mut node_edges = vec![Vec::new(); ids.len()];
        let mut edge_nodes = Vec::with_capacity(hot.hyperedge_count());
        for (e, (_, edge)) in hot.hyperedges().enumerate() {
            let members: Vec<u32> = edge.members().iter().map(|m| position[m]).collect();
            for &m in &members {
                node_edges[m as usize].push(e as u32);
            }
            edge_nodes.push(members);
        }
        IncidenceIndex {
            ids,
            position,
            node_edges,
            edge_nodes,
        }
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn id(&self, index: u32) -> &NodeId {
        &self.ids[index as usize]
    }

    pub fn position(&self, id: &str) -> Option<u32> {
        self.position.get(id).copied()
    }

    /// Hop distances from `source` to every node, [`UNREACHABLE`] where no
    /// path exists. Cost is linear in total hyperedge membership.
    pub fn bfs(&self, source: u32) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.ids.len()];
        let mut edge_seen = vec![false; self.edge_nodes.len()];
        let mut queue = VecDeque::new();
        dist[source as usize] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u as usize] + 1;
            for &e in &self.node_edges[u as usize] {
                if std::mem::replace(&mut edge_seen[e as usize], true) {
                    continue;
                }
                for &v in &self.edge_nodes[e as usize] {
                    if dist[v as usize] == UNREACHABLE {
                        dist[v as usize] = next;
                        queue.push_back(v);
                    }
                }
            }
        }
        dist
    }

    /// BFS rows for each source, computed in parallel.
    pub fn bfs_many(&self, sources: &[u32]) -> HashMap<u32, Vec<u32>> {
        sources.par_iter().map(|&s| (s, self.bfs(s))).collect()
    }
}

/// Neighbours of every node in the induced graph. Nodes without neighbours
/// map to an empty set.
pub fn induced_adjacency(hot: &TextHypergraph) -> BTreeMap<NodeId, BTreeSet<NodeId>> {
    let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> = hot
        .node_ids()
        .map(|id| (id.clone(), BTreeSet::new()))
        .collect();
    for (_, edge) in hot.hyperedges() {
        for u in edge.members() {
            let row = adj.get_mut(u).expect("member is a node");
            row.extend(edge.members().iter().filter(|v| *v != u).cloned());
        }
    }
    adj
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Distance {
    Hops(u32),
    Unreachable,
}

impl Distance {
    pub fn hops(self) -> Option<u32> {
        match self {
            Distance::Hops(h) => Some(h),
            Distance::Unreachable => None,
        }
    }
}

/// Hop distances from a set of source nodes to every node.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    index: IncidenceIndex,
    rows: HashMap<u32, Vec<u32>>,
}

impl DistanceMatrix {
    /// Distance from `source` to `target`, or `None` if `source` was not
    /// requested or `target` is not a node.
    pub fn get(&self, source: &str, target: &str) -> Option<Distance> {
        let row = self.rows.get(&self.index.position(source)?)?;
        let d = row[self.index.position(target)? as usize];
        Some(if d == UNREACHABLE {
            Distance::Unreachable
        } else {
            Distance::Hops(d)
        })
    }

    pub fn sources(&self) -> impl Iterator<Item = &NodeId> {
        self.rows.keys().map(|&s| self.index.id(s))
    }
}

/// Breadth-first distances from each source in the induced graph.
pub fn shortest_distances<'a, I>(hot: &TextHypergraph, sources: I) -> Result<DistanceMatrix>
where
    I: IntoIterator<Item = &'a NodeId>,
{
    let index = IncidenceIndex::new(hot);
    let mut positions = Vec::new();
    for id in sources {
        let pos = index
            .position(id.as_str())
            .ok_or_else(|| Error::input(format!("unknown source node `{id}`")))?;
        positions.push(pos);
    }
    positions.sort_unstable();
    positions.dedup();
    let rows = index.bfs_many(&positions);
    Ok(DistanceMatrix { index, rows })
}
