//! Two-step similarity construction.
//!
//! 1. Keep the `k` highest-scoring sentences of each document (mean
//!    TF-IDF weight).
//! 2. Embed them and pick cross-document sentence pairs by cosine
//!    similarity: first greedily without reusing any sentence or document,
//!    then, if the budget is not met, filling with the best remaining pairs.
//! 3. Ask the chat model for the single common topic of each pair; pairs
//!    whose topics normalize to the same key merge into one hyperedge.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::topics::{normalize_topic, pair_prompt, parse_topic_list, TopicTally};
use crate::corpus::{document_nodes, sentence_score, Document, TfIdfStats};
use crate::error::{Error, Result};
use crate::hot::{NodeId, TextHypergraph};
use crate::provider::{run_bounded, ChatModel, Embedder, JsonlCache};

/// A sentence addressed by document and position; orders by
/// `(doc_id, index)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SentenceRef {
    pub doc_id: NodeId,
    pub index: usize,
}

impl std::fmt::Display for SentenceRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}#{}", self.doc_id, self.index)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentenceCandidate {
    pub sentence: SentenceRef,
    pub text: String,
    pub score: f64,
    /// Unit-norm embedding, filled by [`embed`].
    pub embedding: Option<Vec<f32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairPhase {
    /// Chosen without reusing a sentence or document.
    Diverse,
    /// Chosen while filling the remaining budget.
    Fill,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentencePair {
    /// The smaller of the two refs.
    pub a: SentenceRef,
    pub b: SentenceRef,
    pub similarity: f64,
    pub phase: PairPhase,
}

/// Per document, the `k_per_doc` best sentences by score (ties: earlier
/// sentence first). Output is in corpus order, then rank.
pub fn filter_sentences(
    docs: &[Document],
    stats: &TfIdfStats,
    k_per_doc: usize,
) -> Result<Vec<SentenceCandidate>> {
    if k_per_doc == 0 {
        return Err(Error::input("k_per_doc must be at least 1"));
    }
    let mut out = Vec::new();
    for doc in docs {
        let mut scored: Vec<(f64, usize)> = doc
            .sentences
            .iter()
            .map(|s| (sentence_score(s, stats), s.index))
            .collect();
        scored.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
        for &(score, index) in scored.iter().take(k_per_doc) {
            out.push(SentenceCandidate {
                sentence: SentenceRef {
                    doc_id: doc.id.clone(),
                    index,
                },
                text: doc.sentences[index].text.clone(),
                score,
                embedding: None,
            });
        }
    }
    Ok(out)
}

/// Embeds candidates in batches of `batch_size`, normalizing every vector
/// to unit length. All vectors must share one dimension.
pub fn embed(
    mut candidates: Vec<SentenceCandidate>,
    embedder: &dyn Embedder,
    batch_size: usize,
) -> Result<Vec<SentenceCandidate>> {
    let batch_size = batch_size.max(1);
    let mut dim = None;
    for (b, chunk) in candidates.chunks_mut(batch_size).enumerate() {
        let inputs: Vec<String> = chunk.iter().map(|c| c.text.clone()).collect();
        let vectors = embedder.embed(&inputs).map_err(|source| Error::Provider {
            unit: format!("embedding batch {b}"),
            source,
        })?;
        if vectors.len() != chunk.len() {
            return Err(Error::config(format!(
                "embedding batch {b}: expected {} vectors, got {}",
                chunk.len(),
                vectors.len()
            )));
        }
        for (cand, v) in chunk.iter_mut().zip(vectors) {
            match dim {
                None => dim = Some(v.len()),
                Some(d) if d != v.len() => {
                    return Err(Error::config(format!(
                        "embedding dimension changed from {d} to {} at {}",
                        v.len(),
                        cand.sentence
                    )))
                }
                _ => {}
            }
            cand.embedding = Some(normalized(v, &cand.sentence)?);
        }
    }
    Ok(candidates)
}

fn normalized(v: Vec<f32>, at: &SentenceRef) -> Result<Vec<f32>> {
    let norm = v.iter().map(|&x| f64::from(x).powi(2)).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::config(format!("degenerate embedding for {at}")));
    }
    Ok(v.into_iter()
        .map(|x| (f64::from(x) / norm) as f32)
        .collect())
}

pub fn cosine(a: &[f32], b: &[f32]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| f64::from(x) * f64::from(y))
        .sum()
}

/// A cross-document candidate pair by position in the candidate slice,
/// with `first < second` by [`SentenceRef`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredPair {
    pub first: usize,
    pub second: usize,
    pub similarity: f64,
}

/// Source of similarity-ranked candidate pairs.
///
/// Implementations return cross-document pairs sorted by descending
/// similarity, ties broken by the `(first, second)` sentence refs in
/// ascending order. An approximate index can stand in for the exact scan.
pub trait PairSearch {
    fn ranked_pairs(&self, candidates: &[SentenceCandidate]) -> Result<Vec<ScoredPair>>;
}

/// Exhaustive all-pairs cosine similarity.
#[derive(Debug, Default, Clone, Copy)]
pub struct ExactPairSearch;

impl PairSearch for ExactPairSearch {
    fn ranked_pairs(&self, candidates: &[SentenceCandidate]) -> Result<Vec<ScoredPair>> {
        let vecs: Vec<&[f32]> = candidates
            .iter()
            .map(|c| {
                c.embedding
                    .as_deref()
                    .ok_or_else(|| Error::input(format!("{} has no embedding", c.sentence)))
            })
            .collect::<Result<_>>()?;
        let mut pairs = Vec::new();
        for i in 0..candidates.len() {
            for j in i + 1..candidates.len() {
                if candidates[i].sentence.doc_id == candidates[j].sentence.doc_id {
                    continue;
                }
                let (first, second) = if candidates[i].sentence <= candidates[j].sentence {
                    (i, j)
                } else {
                    (j, i)
                };
                pairs.push(ScoredPair {
                    first,
                    second,
                    similarity: cosine(vecs[i], vecs[j]),
                });
            }
        }
        let key = |p: &ScoredPair| {
            (
                &candidates[p.first].sentence,
                &candidates[p.second].sentence,
            )
        };
        pairs.sort_unstable_by(|x, y| {
            y.similarity
                .total_cmp(&x.similarity)
                .then_with(|| key(x).cmp(&key(y)))
        });
        Ok(pairs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairSelection {
    pub pairs: Vec<SentencePair>,
    /// How many pairs short of the requested budget the selection fell.
    pub shortfall: usize,
}

pub fn select_pairs(candidates: &[SentenceCandidate], k_pairs: usize) -> Result<PairSelection> {
    select_pairs_with(&ExactPairSearch, candidates, k_pairs)
}

/// Two-phase greedy selection of up to `k_pairs` pairs.
pub fn select_pairs_with(
    search: &dyn PairSearch,
    candidates: &[SentenceCandidate],
    k_pairs: usize,
) -> Result<PairSelection> {
    if k_pairs == 0 {
        return Err(Error::input("k_pairs must be at least 1"));
    }
    if candidates.len() < 2 {
        return Err(Error::input("pair selection needs at least two candidates"));
    }
    let ranked = search.ranked_pairs(candidates)?;
    let mut taken = vec![false; ranked.len()];
    let mut pairs = Vec::new();

    let mut used_sentences = HashSet::new();
    let mut used_docs = HashSet::new();
    for (i, p) in ranked.iter().enumerate() {
        if pairs.len() == k_pairs {
            break;
        }
        let (a, b) = (
            &candidates[p.first].sentence,
            &candidates[p.second].sentence,
        );
        if used_sentences.contains(a)
            || used_sentences.contains(b)
            || used_docs.contains(&a.doc_id)
            || used_docs.contains(&b.doc_id)
        {
            continue;
        }
        used_sentences.extend([a, b]);
        used_docs.extend([&a.doc_id, &b.doc_id]);
        taken[i] = true;
        pairs.push(pair(candidates, p, PairPhase::Diverse));
    }

    for (i, p) in ranked.iter().enumerate() {
        if pairs.len() == k_pairs {
            break;
        }
        if !taken[i] {
            pairs.push(pair(candidates, p, PairPhase::Fill));
        }
    }

    let shortfall = k_pairs - pairs.len();
    if shortfall > 0 {
        log::warn!(
            "requested {k_pairs} sentence pairs but only {} distinct pairs exist",
            pairs.len()
        );
    }
    Ok(PairSelection { pairs, shortfall })
}

fn pair(candidates: &[SentenceCandidate], p: &ScoredPair, phase: PairPhase) -> SentencePair {
    SentencePair {
        a: candidates[p.first].sentence.clone(),
        b: candidates[p.second].sentence.clone(),
        similarity: p.similarity,
        phase,
    }
}

/// Cached outcome of one pair-topic request.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairTopic {
    pub a: SentenceRef,
    pub b: SentenceRef,
    /// Surface form of the topic; `None` when the model gave nothing usable.
    pub topic: Option<String>,
}

pub type PairTopicCache = JsonlCache<(SentenceRef, SentenceRef), PairTopic>;

pub fn open_cache(path: impl AsRef<std::path::Path>) -> Result<PairTopicCache> {
    JsonlCache::open(path, |p: &PairTopic| (p.a.clone(), p.b.clone()))
}

fn request_pair_topic(chat: &dyn ChatModel, a: &str, b: &str) -> Result<Option<String>, String> {
    let messages = pair_prompt(a, b);
    for _ in 0..2 {
        let response = chat.complete(&messages).map_err(|e| e.to_string())?;
        if let Some(topics) = parse_topic_list(&response) {
            // one topic per pair: the first usable entry
            return Ok(topics.into_iter().find(|t| normalize_topic(t).is_some()));
        }
    }
    Ok(None)
}

/// Asks for the common topic of every pair and merges pairs by topic key
/// into hyperedges over all `docs`. Pairs whose request fails are skipped
/// with a warning.
pub fn extract_pair_topics(
    pairs: &[SentencePair],
    candidates: &[SentenceCandidate],
    docs: &[Document],
    chat: &dyn ChatModel,
    max_concurrent: usize,
    mut cache: Option<&mut PairTopicCache>,
) -> Result<TextHypergraph> {
    if pairs.is_empty() {
        return Err(Error::input("no sentence pairs to extract topics from"));
    }
    let text: HashMap<&SentenceRef, &str> = candidates
        .iter()
        .map(|c| (&c.sentence, c.text.as_str()))
        .collect();
    let lookup = |r: &SentenceRef| {
        text.get(r)
            .copied()
            .ok_or_else(|| Error::input(format!("pair references unknown sentence {r}")))
    };
    for p in pairs {
        lookup(&p.a)?;
        lookup(&p.b)?;
    }

    let pending: Vec<&SentencePair> = pairs
        .iter()
        .filter(|p| {
            cache
                .as_ref()
                .is_none_or(|c| c.get(&(p.a.clone(), p.b.clone())).is_none())
        })
        .collect();
    let results = run_bounded(&pending, max_concurrent, |p| {
        request_pair_topic(chat, text[&p.a], text[&p.b])
    })?;

    let mut fresh = HashMap::new();
    let mut completed = Vec::new();
    for (p, r) in pending.iter().zip(results) {
        match r {
            Ok(topic) => {
                let rec = PairTopic {
                    a: p.a.clone(),
                    b: p.b.clone(),
                    topic,
                };
                completed.push(rec.clone());
                fresh.insert((p.a.clone(), p.b.clone()), rec);
            }
            Err(e) => log::warn!("skipping pair {} / {}: {e}", p.a, p.b),
        }
    }
    if let Some(c) = cache.as_deref_mut() {
        c.append(&completed)?;
    }

    let mut hot = document_nodes(docs)?;
    let mut tally = TopicTally::default();
    for p in pairs {
        let key = (p.a.clone(), p.b.clone());
        let rec = fresh
            .get(&key)
            .or_else(|| cache.as_ref().and_then(|c| c.get(&key)));
        let Some(surface) = rec.and_then(|r| r.topic.as_deref()) else {
            continue;
        };
        if let Some(norm) = normalize_topic(surface) {
            tally.add(surface, &norm, [p.a.doc_id.clone(), p.b.doc_id.clone()]);
        }
    }
    tally.into_hyperedges(&mut hot)?;
    Ok(hot)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoStepParams {
    pub k_sentences: usize,
    /// Defaults to ten pairs per document.
    pub k_pairs: Option<usize>,
    pub prune_min_size: Option<usize>,
    pub embed_batch: usize,
    pub max_concurrent: usize,
}

impl Default for TwoStepParams {
    fn default() -> Self {
        TwoStepParams {
            k_sentences: 5,
            k_pairs: None,
            prune_min_size: None,
            embed_batch: 64,
            max_concurrent: 4,
        }
    }
}

impl TwoStepParams {
    pub fn pair_budget(&self, doc_count: usize) -> usize {
        self.k_pairs.unwrap_or(10 * doc_count)
    }
}

#[derive(Debug, Clone)]
pub struct TwoStepOutput {
    pub hot: TextHypergraph,
    pub candidates: Vec<SentenceCandidate>,
    pub selection: PairSelection,
}

/// The whole pipeline, optionally pruning small hyperedges at the end.
pub fn build(
    docs: &[Document],
    stats: &TfIdfStats,
    params: &TwoStepParams,
    embedder: &dyn Embedder,
    chat: &dyn ChatModel,
    cache: Option<&mut PairTopicCache>,
) -> Result<TwoStepOutput> {
    let candidates = filter_sentences(docs, stats, params.k_sentences)?;
    let candidates = embed(candidates, embedder, params.embed_batch)?;
    let selection = select_pairs(&candidates, params.pair_budget(docs.len()))?;
    let mut hot = extract_pair_topics(
        &selection.pairs,
        &candidates,
        docs,
        chat,
        params.max_concurrent,
        cache,
    )?;
    if let Some(min) = params.prune_min_size {
        hot = hot.prune_by_size(min)?;
    }
    Ok(TwoStepOutput {
        hot,
        candidates,
        selection,
    })
}
