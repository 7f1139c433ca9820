//! All-Words construction: every vocabulary word shared by at least two
//! documents is a candidate hyperedge over the documents containing it,
//! scored by its mean TF-IDF over those documents; only the top fraction
//! of candidates is kept.

use rayon::prelude::*;

use crate::corpus::{document_nodes, Document, TfIdfStats};
use crate::error::{Error, Result};
use crate::hot::{NodeId, TextHypergraph};

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredWordEdge {
    pub word: String,
    /// Documents containing the word, in corpus order.
    pub members: Vec<NodeId>,
    pub score: f64,
}

/// One scored candidate per vocabulary word with two or more documents,
/// in word order.
pub fn build_word_edges(stats: &TfIdfStats) -> Vec<ScoredWordEdge> {
    let words: Vec<&str> = stats.vocabulary().collect();
    let n = stats.doc_count() as f64;
    words
        .par_iter()
        .filter_map(|&word| {
            let postings = stats.postings(word)?;
            if postings.len() < 2 {
                return None;
            }
            let idf = (n / postings.len() as f64).ln();
            let total: f64 = postings.iter().map(|p| p.count as f64 * idf).sum();
            Some(ScoredWordEdge {
                word: word.to_owned(),
                members: postings
                    .iter()
                    .map(|p| stats.doc_id(p.doc).clone())
                    .collect(),
                score: total / postings.len() as f64,
            })
        })
        .collect()
}

/// Number of candidates kept for `fraction` of `count`.
///
/// Rounds up so any positive fraction keeps at least one edge. A small
/// epsilon absorbs binary representation error (`0.07 * 100` must keep 7).
pub fn keep_count(fraction: f64, count: usize) -> usize {
    let raw = fraction * count as f64;
    ((raw - 1e-9).ceil().max(0.0) as usize).min(count)
}

/// Keeps the best-scoring `ceil(fraction * len)` candidates and returns a
/// hypergraph over all `docs`. Ties at equal score favour the
/// lexicographically smaller word.
pub fn prune_top_fraction(
    mut edges: Vec<ScoredWordEdge>,
    fraction: f64,
    docs: &[Document],
) -> Result<TextHypergraph> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::input(format!(
            "top fraction must be in (0, 1], got {fraction}"
        )));
    }
    let mut hot = document_nodes(docs)?;
    if edges.is_empty() {
        log::warn!("no candidate word edges; emitting a hypergraph without hyperedges");
        return Ok(hot);
    }
    edges.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.word.cmp(&b.word))
    });
    let keep = keep_count(fraction, edges.len());
    for edge in edges.into_iter().take(keep) {
        hot.add_hyperedge(format!("word:{}", edge.word), edge.word, edge.members)?;
    }
    Ok(hot)
}

/// Candidate generation followed by pruning.
pub fn build(docs: &[Document], stats: &TfIdfStats, fraction: f64) -> Result<TextHypergraph> {
    prune_top_fraction(build_word_edges(stats), fraction, docs)
}
