//! Structural navigability metrics over a hypergraph of text.
//!
//! Distances are hop counts in the induced graph. Given relevance sets `R`
//! and size-matched random sets `R'`, the suite reports mean relevant and
//! random distance, their ratio (effort ratio), the share of disconnected
//! relevant pairs, and one-hop saturation for both families.

mod alignment;
mod metrics;
mod random;
mod report;
mod saturation;

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hot::{NodeId, TextHypergraph};

pub use alignment::{classify_alignment, AlignmentReport, EdgeAlignment};
pub use metrics::{
    drand, drel, effort_ratio, evaluate, mean_distance, saturation, EvalReport, FamilyCounts,
    MeanDistance,
};
pub use random::{add_random_hyperedges, random_hot, RANDOM_EDGE_SIZES};
pub use report::{render_table, ReportRow};
pub use saturation::{saturation_sim, TrajectoryPoint, SIM_EDGE_SIZES};

/// Independent ChaCha streams per use, so one user seed driving several
/// random draws never correlates them.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Stream {
    RandomSets = 1,
    RandomHot = 2,
    Simulation = 3,
}

pub(crate) fn seeded_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Sets of mutually relevant documents. Each set holds at least two
/// distinct ids; a document may appear in several sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelevanceSets {
    sets: Vec<Vec<NodeId>>,
}

#[derive(Deserialize)]
struct RelevanceFile {
    sets: Vec<Vec<NodeId>>,
}

impl RelevanceSets {
    /// Duplicate ids inside a set are collapsed; members are sorted.
    pub fn new(sets: Vec<Vec<NodeId>>) -> Result<Self> {
        let sets = sets
            .into_iter()
            .enumerate()
            .map(|(i, mut s)| {
                s.sort();
                s.dedup();
                if s.len() < 2 {
                    return Err(Error::input(format!(
                        "relevance set {i} has fewer than two distinct documents"
                    )));
                }
                Ok(s)
            })
            .collect::<Result<_>>()?;
        Ok(RelevanceSets { sets })
    }

    pub fn from_json_bytes(bytes: &[u8]) -> Result<Self> {
        let file: RelevanceFile =
            serde_json::from_slice(bytes).map_err(|e| Error::from_json(e, None))?;
        Self::new(file.sets)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_bytes(&std::fs::read(path)?)
    }

    pub fn to_json_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec(self).expect("relevance sets serialize");
        out.push(b'\n');
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_bytes())?;
        Ok(())
    }

    pub fn sets(&self) -> &[Vec<NodeId>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Fails with every id that is not a node of `hot`, in first-seen order.
    pub fn validate(&self, hot: &TextHypergraph) -> Result<()> {
        validate_family(&self.sets, hot)
    }

    /// Count of sets per set size.
    pub fn size_profile(&self) -> BTreeMap<usize, usize> {
        size_profile(&self.sets)
    }
}

fn validate_family(sets: &[Vec<NodeId>], hot: &TextHypergraph) -> Result<()> {
    let mut seen = HashSet::new();
    let offenders: Vec<String> = sets
        .iter()
        .flatten()
        .filter(|id| !hot.contains_node(id.as_str()) && seen.insert(*id))
        .map(|id| id.to_string())
        .collect();
    if offenders.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation { offenders })
    }
}

fn size_profile(sets: &[Vec<NodeId>]) -> BTreeMap<usize, usize> {
    let mut profile = BTreeMap::new();
    for s in sets {
        *profile.entry(s.len()).or_insert(0) += 1;
    }
    profile
}

/// Random counterpart of a [`RelevanceSets`]: one set per relevance set,
/// of the same size, drawn uniformly without replacement from all nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSets {
    sets: Vec<Vec<NodeId>>,
    seed: u64,
}

impl RandomSets {
    pub fn sample(hot: &TextHypergraph, relevance: &RelevanceSets, seed: u64) -> Result<Self> {
        let ids: Vec<&NodeId> = hot.node_ids().collect();
        let mut rng = seeded_rng(seed, Stream::RandomSets);
        let sets = relevance
            .sets()
            .iter()
            .map(|r| {
                if r.len() > ids.len() {
                    return Err(Error::input(format!(
                        "cannot draw a random set of {} from {} nodes",
                        r.len(),
                        ids.len()
                    )));
                }
                let mut picked: Vec<NodeId> =
                    rand::seq::index::sample(&mut rng, ids.len(), r.len())
                        .into_iter()
                        .map(|i| ids[i].clone())
                        .collect();
                picked.sort();
                Ok(picked)
            })
            .collect::<Result<_>>()?;
        Ok(RandomSets { sets, seed })
    }

    /// Uses the given sets verbatim as the random family.
    pub fn from_sets(sets: Vec<Vec<NodeId>>, seed: u64) -> Self {
        RandomSets { sets, seed }
    }

    pub fn sets(&self) -> &[Vec<NodeId>] {
        &self.sets
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn size_profile(&self) -> BTreeMap<usize, usize> {
        size_profile(&self.sets)
    }

    pub fn validate(&self, hot: &TextHypergraph) -> Result<()> {
        validate_family(&self.sets, hot)
    }
}
