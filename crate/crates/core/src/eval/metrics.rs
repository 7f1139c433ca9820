use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{validate_family, RandomSets, RelevanceSets};
use crate::error::Result;
use crate::hot::UNREACHABLE;
use crate::hot::{IncidenceIndex, NodeId, TextHypergraph};

/// Pair tallies for one family of sets. Pairs are ordered, so a set of size
/// `k` contributes `k(k-1)` of them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCounts {
    pub sets: usize,
    pub ordered_pairs: u64,
    pub connected_pairs: u64,
    pub disconnected_pairs: u64,
    pub one_hop_pairs: u64,
    /// Sets with at least one connected pair.
    pub contributing_sets: usize,
    /// Sets whose pairs are all disconnected.
    pub skipped_sets: usize,
}

impl FamilyCounts {
    pub fn disconnect_proportion(&self) -> Option<f64> {
        (self.ordered_pairs > 0).then(|| self.disconnected_pairs as f64 / self.ordered_pairs as f64)
    }

    pub fn one_hop_proportion(&self) -> f64 {
        if self.ordered_pairs == 0 {
            0.0
        } else {
            self.one_hop_pairs as f64 / self.ordered_pairs as f64
        }
    }
}

/// Average over sets of the mean hop distance between members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanDistance {
    pub value: Option<f64>,
    /// Disconnected ordered pairs left out of the means.
    pub excluded_pairs: u64,
    /// Sets left out because none of their pairs is connected.
    pub skipped_sets: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

struct Tally {
    counts: FamilyCounts,
    mean: Option<f64>,
}

fn distance_rows(index: &IncidenceIndex, families: &[&[Vec<NodeId>]]) -> HashMap<u32, Vec<u32>> {
    let sources: BTreeSet<u32> = families
        .iter()
        .flat_map(|f| f.iter().flatten())
        .map(|id| index.position(id.as_str()).expect("family validated"))
        .collect();
    index.bfs_many(&sources.into_iter().collect::<Vec<_>>())
}

fn tally(index: &IncidenceIndex, rows: &HashMap<u32, Vec<u32>>, sets: &[Vec<NodeId>]) -> Tally {
    let mut counts = FamilyCounts {
        sets: sets.len(),
        ..FamilyCounts::default()
    };
    let mut sum_of_means = 0.0;
    for set in sets {
        let members: Vec<u32> = set
            .iter()
            .map(|id| index.position(id.as_str()).expect("family validated"))
            .collect();
        let (mut total, mut connected) = (0u64, 0u64);
        for &u in &members {
            let row = &rows[&u];
            for &v in &members {
                if u == v {
                    continue;
                }
                counts.ordered_pairs += 1;
                match row[v as usize] {
                    UNREACHABLE => counts.disconnected_pairs += 1,
                    d => {
                        connected += 1;
                        total += u64::from(d);
                        if d == 1 {
                            counts.one_hop_pairs += 1;
                        }
                    }
                }
            }
        }
        counts.connected_pairs += connected;
        if connected > 0 {
            sum_of_means += total as f64 / connected as f64;
            counts.contributing_sets += 1;
        } else {
            counts.skipped_sets += 1;
        }
    }
    let mean =
        (counts.contributing_sets > 0).then(|| sum_of_means / counts.contributing_sets as f64);
    Tally { counts, mean }
}

fn mean_of(t: &Tally, what: &str) -> MeanDistance {
    let reason = match (t.mean, t.counts.sets) {
        (Some(_), _) => None,
        (None, 0) => Some(format!("no {what} sets")),
        (None, _) => Some(format!("every {what} pair is disconnected")),
    };
    MeanDistance {
        value: t.mean,
        excluded_pairs: t.counts.disconnected_pairs,
        skipped_sets: t.counts.skipped_sets,
        reason,
    }
}

/// Mean distance over an arbitrary family of node sets.
pub fn mean_distance(hot: &TextHypergraph, sets: &[Vec<NodeId>]) -> Result<MeanDistance> {
    validate_family(sets, hot)?;
    let index = IncidenceIndex::new(hot);
    let rows = distance_rows(&index, &[sets]);
    Ok(mean_of(&tally(&index, &rows, sets), "node"))
}

pub fn drel(hot: &TextHypergraph, relevance: &RelevanceSets) -> Result<MeanDistance> {
    relevance.validate(hot)?;
    let index = IncidenceIndex::new(hot);
    let rows = distance_rows(&index, &[relevance.sets()]);
    Ok(mean_of(&tally(&index, &rows, relevance.sets()), "relevant"))
}

pub fn drand(hot: &TextHypergraph, random: &RandomSets) -> Result<MeanDistance> {
    random.validate(hot)?;
    let index = IncidenceIndex::new(hot);
    let rows = distance_rows(&index, &[random.sets()]);
    Ok(mean_of(&tally(&index, &rows, random.sets()), "random"))
}

/// One-hop proportions `(sigma_rel, sigma_rand)`. Disconnected pairs count
/// in the denominators.
pub fn saturation(
    hot: &TextHypergraph,
    relevance: &RelevanceSets,
    random: &RandomSets,
) -> Result<(f64, f64)> {
    let r = effort_ratio(hot, relevance, random)?;
    Ok((r.sigma_rel, r.sigma_rand))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub drel: Option<f64>,
    pub drand: Option<f64>,
    pub effort_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub undefined_reason: Option<String>,
    /// Share of relevant ordered pairs with no connecting path.
    pub rdp: Option<f64>,
    /// The same proportion over the random sets; diagnostic only.
    pub random_disconnect_proportion: Option<f64>,
    pub sigma_rel: f64,
    pub sigma_rand: f64,
    pub node_count: usize,
    pub hyperedge_count: usize,
    pub relevant: FamilyCounts,
    pub random: FamilyCounts,
    pub seed: u64,
}

pub fn effort_ratio(
    hot: &TextHypergraph,
    relevance: &RelevanceSets,
    random: &RandomSets,
) -> Result<EvalReport> {
    relevance.validate(hot)?;
    random.validate(hot)?;
    let index = IncidenceIndex::new(hot);
    let rows = distance_rows(&index, &[relevance.sets(), random.sets()]);
    let rel = tally(&index, &rows, relevance.sets());
    let rand = tally(&index, &rows, random.sets());

    let (effort_ratio, undefined_reason) = match (rel.mean, rand.mean) {
        (Some(a), Some(b)) => (Some(a / b), None),
        _ => {
            let reason = [
                mean_of(&rel, "relevant").reason,
                mean_of(&rand, "random").reason,
            ]
            .into_iter()
            .flatten()
            .collect::<Vec<_>>()
            .join("; ");
            (None, Some(reason))
        }
    };
    Ok(EvalReport {
        drel: rel.mean,
        drand: rand.mean,
        effort_ratio,
        undefined_reason,
        rdp: rel.counts.disconnect_proportion(),
        random_disconnect_proportion: rand.counts.disconnect_proportion(),
        sigma_rel: rel.counts.one_hop_proportion(),
        sigma_rand: rand.counts.one_hop_proportion(),
        node_count: hot.node_count(),
        hyperedge_count: hot.hyperedge_count(),
        relevant: rel.counts,
        random: rand.counts,
        seed: random.seed(),
    })
}

/// Samples the random sets with `seed` and reports.
pub fn evaluate(hot: &TextHypergraph, relevance: &RelevanceSets, seed: u64) -> Result<EvalReport> {
    relevance.validate(hot)?;
    let random = RandomSets::sample(hot, relevance, seed)?;
    effort_ratio(hot, relevance, &random)
}
