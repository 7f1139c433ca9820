use std::fs;

use anyhow::{Context, Result};
use hotkit_core::eval::{saturation_sim, RelevanceSets, TrajectoryPoint};
use hotkit_core::TextHypergraph;
use serde::Serialize;

use crate::args::SimulateArgs;

#[derive(Debug, Serialize)]
struct TrajectoryFile<'a> {
    hot: &'a std::path::Path,
    relevance: &'a std::path::Path,
    alpha: f64,
    steps: usize,
    seed: u64,
    /// First step whose relevant pairs are all one hop apart.
    saturated_at: Option<usize>,
    trajectory: &'a [TrajectoryPoint],
}

pub fn run(a: &SimulateArgs) -> Result<()> {
    let hot = TextHypergraph::load(&a.hot)
        .with_context(|| format!("reading hypergraph {}", a.hot.display()))?;
    let relevance = RelevanceSets::read(&a.relevance)
        .with_context(|| format!("reading relevance sets {}", a.relevance.display()))?;
    let trajectory = saturation_sim(&hot, &relevance, a.alpha, a.steps, a.seed)?;
    let saturated_at = trajectory
        .iter()
        .find(|p| p.sigma_rel == 1.0)
        .map(|p| p.step);
    let file = TrajectoryFile {
        hot: &a.hot,
        relevance: &a.relevance,
        alpha: a.alpha,
        steps: a.steps,
        seed: a.seed,
        saturated_at,
        trajectory: &trajectory,
    };
    let mut bytes = serde_json::to_vec_pretty(&file)?;
    bytes.push(b'\n');
    if let Some(dir) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(&a.out, bytes).with_context(|| format!("writing {}", a.out.display()))?;
    if let Some(last) = trajectory.last() {
        log::info!(
            "{} steps, final ER {:?}, saturated at {saturated_at:?}",
            last.step,
            last.effort_ratio
        );
    }
    Ok(())
}
