use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use hotkit_core::eval::{evaluate, render_table, RelevanceSets, ReportRow};
use hotkit_core::{Error, TextHypergraph};
use serde::Serialize;

use crate::args::EvaluateArgs;
use crate::construct::Manifest;

const MAX_LISTED: usize = 10;

#[derive(Debug, Serialize)]
pub struct ReportFile {
    pub relevance: PathBuf,
    pub seed: u64,
    pub rows: Vec<ReportRow>,
}

/// Splits `LABEL=PATH`; a bare path is labelled from its manifest or name.
pub fn parse_hot_arg(arg: &str) -> (Option<String>, PathBuf) {
    match arg.split_once('=') {
        Some((label, path)) if !label.is_empty() => (Some(label.to_owned()), path.into()),
        _ => (None, arg.into()),
    }
}

pub fn default_label(path: &Path) -> String {
    if let Some(m) = Manifest::beside(path) {
        return m.label;
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("hot");
    match path
        .parent()
        .and_then(|p| p.file_name())
        .and_then(|s| s.to_str())
    {
        Some(dir) if stem == "hot" => dir.to_owned(),
        _ => stem.to_owned(),
    }
}

fn offender_summary(offenders: &[String]) -> String {
    let mut s = offenders
        .iter()
        .take(MAX_LISTED)
        .map(String::as_str)
        .collect::<Vec<_>>()
        .join(", ");
    if offenders.len() > MAX_LISTED {
        s.push_str(&format!(" (and {} more)", offenders.len() - MAX_LISTED));
    }
    s
}

pub fn evaluate_all(a: &EvaluateArgs) -> Result<ReportFile> {
    let relevance = RelevanceSets::read(&a.relevance)
        .with_context(|| format!("reading relevance sets {}", a.relevance.display()))?;
    let mut rows = Vec::with_capacity(a.hots.len());
    for arg in &a.hots {
        let (label, path) = parse_hot_arg(arg);
        let hot = TextHypergraph::load(&path)
            .with_context(|| format!("reading hypergraph {}", path.display()))?;
        match relevance.validate(&hot) {
            Err(Error::Validation { offenders }) => bail!(
                "{} relevance ids are not nodes of {}: {}",
                offenders.len(),
                path.display(),
                offender_summary(&offenders)
            ),
            other => other?,
        }
        let report = evaluate(&hot, &relevance, a.seed)?;
        if let Some(reason) = &report.undefined_reason {
            log::warn!("{}: effort ratio undefined ({reason})", path.display());
        }
        rows.push(ReportRow {
            method: label.unwrap_or_else(|| default_label(&path)),
            report,
        });
    }
    Ok(ReportFile {
        relevance: a.relevance.clone(),
        seed: a.seed,
        rows,
    })
}

pub fn run(a: &EvaluateArgs) -> Result<()> {
    let report = evaluate_all(a)?;
    let table = render_table(&report.rows);
    print!("{table}");
    if let Some(out) = &a.out {
        fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
        let mut json = serde_json::to_vec_pretty(&report)?;
        json.push(b'\n');
        fs::write(out.join("report.json"), json)?;
        fs::write(out.join("report.txt"), &table)?;
    }
    Ok(())
}
