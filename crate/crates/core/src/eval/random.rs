use std::ops::RangeInclusive;

use rand::Rng;

use super::{seeded_rng, Stream};

use crate::error::{Error, Result};
use crate::hot::{Node, NodeId, TextHypergraph};

/// Hyperedge sizes drawn by [`random_hot`], capped at the node count.
pub const RANDOM_EDGE_SIZES: RangeInclusive<usize> = 2..=10;

/// A hypergraph over `node_ids` (empty text) with `edge_count` random
/// hyperedges.
pub fn random_hot(node_ids: &[NodeId], edge_count: usize, seed: u64) -> Result<TextHypergraph> {
    let mut hot = TextHypergraph::new();
    for id in node_ids {
        hot.add_node(id.clone(), Node::new(""))?;
    }
    add_random_hyperedges(&mut hot, edge_count, seed)?;
    Ok(hot)
}

/// Adds `edge_count` hyperedges `random-<i>`, each of uniform size in
/// [`RANDOM_EDGE_SIZES`] with members drawn uniformly without replacement.
pub fn add_random_hyperedges(hot: &mut TextHypergraph, edge_count: usize, seed: u64) -> Result<()> {
    if edge_count == 0 {
        return Err(Error::input("edge count must be at least 1"));
    }
    let ids: Vec<NodeId> = hot.node_ids().cloned().collect();
    if ids.len() < 2 {
        return Err(Error::input("a random hypergraph needs at least two nodes"));
    }
    let max = (*RANDOM_EDGE_SIZES.end()).min(ids.len());
    let mut rng = seeded_rng(seed, Stream::RandomHot);
    for i in 0..edge_count {
        let size = rng.random_range(*RANDOM_EDGE_SIZES.start()..=max);
        let members: Vec<NodeId> = rand::seq::index::sample(&mut rng, ids.len(), size)
            .into_iter()
            .map(|j| ids[j].clone())
            .collect();
        let id = format!("random-{i}");
        hot.add_hyperedge(id.clone(), id, members)?;
    }
    Ok(())
}
