use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::RelevanceSets;
use crate::error::{Error, Result};
use crate::hot::{HyperedgeId, NodeId, TextHypergraph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeAlignment {
    pub id: HyperedgeId,
    pub size: usize,
    /// Relevant unordered pairs over all unordered pairs; `None` below size 2.
    pub relevant_fraction: Option<f64>,
    /// Fraction at least alpha.
    pub relevance_aligned: Option<bool>,
    /// Fraction below beta.
    pub non_relevance_aligned: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentReport {
    pub alpha: f64,
    pub beta: f64,
    pub edges: Vec<EdgeAlignment>,
}

/// Unordered pairs that share at least one relevance set.
pub(crate) struct RelevantPairs(HashSet<(NodeId, NodeId)>);

impl RelevantPairs {
    pub fn new(relevance: &RelevanceSets) -> Self {
        let mut pairs = HashSet::new();
        for set in relevance.sets() {
            for (i, a) in set.iter().enumerate() {
                for b in &set[i + 1..] {
                    pairs.insert(ordered(a, b));
                }
            }
        }
        RelevantPairs(pairs)
    }

    pub fn contains(&self, a: &NodeId, b: &NodeId) -> bool {
        self.0.contains(&ordered(a, b))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sorted, for deterministic sampling.
    pub fn to_sorted_vec(&self) -> Vec<(NodeId, NodeId)> {
        let mut v: Vec<_> = self.0.iter().cloned().collect();
        v.sort();
        v
    }

    /// `(relevant, total)` unordered pairs among `members`.
    pub fn count_among(&self, members: &[&NodeId]) -> (usize, usize) {
        let mut relevant = 0;
        let mut total = 0;
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                total += 1;
                if self.contains(a, b) {
                    relevant += 1;
                }
            }
        }
        (relevant, total)
    }
}

fn ordered(a: &NodeId, b: &NodeId) -> (NodeId, NodeId) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

pub fn classify_alignment(
    hot: &TextHypergraph,
    relevance: &RelevanceSets,
    alpha: f64,
    beta: f64,
) -> Result<AlignmentReport> {
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::input(format!("{name} must be in [0, 1], got {v}")));
        }
    }
    relevance.validate(hot)?;
    let pairs = RelevantPairs::new(relevance);
    let edges = hot
        .hyperedges()
        .map(|(id, e)| {
            let members: Vec<&NodeId> = e.members().iter().collect();
            let fraction = (members.len() >= 2).then(|| {
                let (rel, total) = pairs.count_among(&members);
                rel as f64 / total as f64
            });
            EdgeAlignment {
                id: id.clone(),
                size: members.len(),
                relevant_fraction: fraction,
                relevance_aligned: fraction.map(|f| f >= alpha),
                non_relevance_aligned: fraction.map(|f| f < beta),
            }
        })
        .collect();
    Ok(AlignmentReport { alpha, beta, edges })
}
