use std::fs;
use std::io::{BufWriter, Write};

use anyhow::{Context, Result};
use hotkit_core::corpus::multihop;
use hotkit_core::eval::RelevanceSets;

use crate::args::AdaptArgs;

pub fn run(a: &AdaptArgs) -> Result<()> {
    let corpus = fs::read(&a.corpus).with_context(|| format!("reading {}", a.corpus.display()))?;
    let queries =
        fs::read(&a.queries).with_context(|| format!("reading {}", a.queries.display()))?;
    let release = multihop::adapt(&corpus, &queries)?;
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;

    let mut w = BufWriter::new(fs::File::create(a.out.join("corpus.jsonl"))?);
    for r in &release.records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    RelevanceSets::new(release.relevance_sets)?.write(a.out.join("relevance.json"))?;

    log::info!(
        "{} articles; {} queries dropped, {} evidence entries unresolved",
        release.records.len(),
        release.dropped_queries,
        release.unresolved_evidence
    );
    Ok(())
}
