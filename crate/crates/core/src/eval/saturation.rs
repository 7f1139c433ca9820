use std::ops::RangeInclusive;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::alignment::RelevantPairs;
use super::{effort_ratio, seeded_rng, RandomSets, RelevanceSets, Stream};
use crate::error::{Error, Result};
use crate::hot::{NodeId, TextHypergraph};

/// Sizes of the hyperedges added by [`saturation_sim`], capped at the node
/// count.
pub const SIM_EDGE_SIZES: RangeInclusive<usize> = 2..=6;

const ATTEMPTS_PER_SIZE: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    /// Number of hyperedges added so far; 0 is the starting hypergraph.
    pub step: usize,
    pub hyperedge_count: usize,
    pub drel: Option<f64>,
    pub drand: Option<f64>,
    pub effort_ratio: Option<f64>,
    pub sigma_rel: f64,
    pub sigma_rand: f64,
    /// Members of the hyperedge added at this step.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub added: Vec<NodeId>,
}

/// Grows `h0` one alpha-relevance-aligned hyperedge at a time and records
/// the metrics after every step.
///
/// Random sets are drawn once from `seed` and held fixed. Each new edge
/// (`sim-<step>`) gets a uniform size from [`SIM_EDGE_SIZES`]; members are
/// seeded from random relevant pairs until the alignment quota is met and
/// the rest are uniform. Candidates failing the quota are redrawn, falling
/// back to smaller sizes; a single relevant pair always qualifies.
pub fn saturation_sim(
    h0: &TextHypergraph,
    relevance: &RelevanceSets,
    alpha: f64,
    steps: usize,
    seed: u64,
) -> Result<Vec<TrajectoryPoint>> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::input(format!(
            "alpha must be in [0, 1], got {alpha}"
        )));
    }
    relevance.validate(h0)?;
    let pairs = RelevantPairs::new(relevance);
    if alpha > 0.0 && pairs.is_empty() {
        return Err(Error::config(
            "alpha > 0 requires at least one relevant pair",
        ));
    }
    let pair_list = pairs.to_sorted_vec();
    let ids: Vec<NodeId> = h0.node_ids().cloned().collect();
    let random = RandomSets::sample(h0, relevance, seed)?;
    let mut rng = seeded_rng(seed, Stream::Simulation);

    let mut hot = h0.clone();
    let mut trajectory = Vec::with_capacity(steps + 1);
    trajectory.push(point(&hot, relevance, &random, 0, Vec::new())?);
    for step in 1..=steps {
        let members = sample_aligned_edge(&mut rng, &ids, &pair_list, &pairs, alpha);
        hot.add_hyperedge(
            format!("sim-{step}"),
            format!("sim-{step}"),
            members.clone(),
        )?;
        trajectory.push(point(&hot, relevance, &random, step, members)?);
    }
    Ok(trajectory)
}

fn point(
    hot: &TextHypergraph,
    relevance: &RelevanceSets,
    random: &RandomSets,
    step: usize,
    added: Vec<NodeId>,
) -> Result<TrajectoryPoint> {
    let r = effort_ratio(hot, relevance, random)?;
    Ok(TrajectoryPoint {
        step,
        hyperedge_count: r.hyperedge_count,
        drel: r.drel,
        drand: r.drand,
        effort_ratio: r.effort_ratio,
        sigma_rel: r.sigma_rel,
        sigma_rand: r.sigma_rand,
        added,
    })
}

fn quota(alpha: f64, size: usize) -> usize {
    let pairs = (size * (size - 1) / 2) as f64;
    (alpha * pairs - 1e-9).ceil().max(0.0) as usize
}

fn sample_aligned_edge(
    rng: &mut ChaCha8Rng,
    ids: &[NodeId],
    pair_list: &[(NodeId, NodeId)],
    pairs: &RelevantPairs,
    alpha: f64,
) -> Vec<NodeId> {
    let max = (*SIM_EDGE_SIZES.end()).min(ids.len());
    let mut size = rng.random_range(*SIM_EDGE_SIZES.start()..=max);
    loop {
        let need = quota(alpha, size);
        for _ in 0..ATTEMPTS_PER_SIZE {
            let mut members: Vec<NodeId> = Vec::with_capacity(size);
            if need > 0 {
                for _ in 0..4 * size {
                    let (a, b) = &pair_list[rng.random_range(0..pair_list.len())];
                    let fresh = [a, b].into_iter().filter(|x| !members.contains(x)).count();
                    if members.len() + fresh <= size {
                        for x in [a, b] {
                            if !members.contains(x) {
                                members.push(x.clone());
                            }
                        }
                    }
                    let refs: Vec<&NodeId> = members.iter().collect();
                    if pairs.count_among(&refs).0 >= need || members.len() == size {
                        break;
                    }
                }
            }
            while members.len() < size {
                let c = &ids[rng.random_range(0..ids.len())];
                if !members.contains(c) {
                    members.push(c.clone());
                }
            }
            let refs: Vec<&NodeId> = members.iter().collect();
            if pairs.count_among(&refs).0 >= need {
                members.sort();
                return members;
            }
        }
        if size == 2 {
            let (a, b) = &pair_list[rng.random_range(0..pair_list.len())];
            return vec![a.clone(), b.clone()];
        }
        size -= 1;
    }
}
