//! LLM topic extraction at document or sentence level.
//!
//! Each unit (a whole document, or one sentence) is sent to the chat model
//! with a fixed prompt; every distinct normalized topic becomes a hyperedge
//! over the documents that produced it. Single-document topics are kept.

use serde::{Deserialize, Serialize};

use super::topics::{normalize_topic, parse_topic_list, unit_prompt, Level, TopicTally};
use crate::corpus::{document_nodes, Document};
use crate::error::{Error, Result};
use crate::hot::{NodeId, TextHypergraph};
use crate::provider::{run_bounded, ChatModel, JsonlCache};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnitRef {
    pub doc_id: NodeId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentence: Option<usize>,
}

impl std::fmt::Display for UnitRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.sentence {
            Some(i) => write!(f, "{}#{i}", self.doc_id),
            None => write!(f, "{}", self.doc_id),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicExtraction {
    pub source: UnitRef,
    /// Topics as the model returned them.
    pub topics: Vec<String>,
    /// Distinct non-empty merge keys, in first-seen order.
    pub normalized: Vec<String>,
}

impl TopicExtraction {
    pub fn new(source: UnitRef, topics: Vec<String>) -> Self {
        let mut normalized: Vec<String> = Vec::new();
        for key in topics.iter().filter_map(|t| normalize_topic(t)) {
            if !normalized.contains(&key) {
                normalized.push(key);
            }
        }
        TopicExtraction {
            source,
            topics,
            normalized,
        }
    }
}

/// Extracts topics from one unit.
///
/// A response that cannot be parsed is retried once; if it still fails the
/// extraction is empty and a warning is logged. Provider failures are
/// errors carrying the unit.
pub fn extract_topics(
    unit: UnitRef,
    text: &str,
    level: Level,
    chat: &dyn ChatModel,
) -> Result<TopicExtraction> {
    if text.trim().is_empty() {
        return Err(Error::input(format!("unit {unit} has empty text")));
    }
    let messages = unit_prompt(level, text);
    for attempt in 0..2 {
        let response = chat.complete(&messages).map_err(|source| Error::Provider {
            unit: unit.to_string(),
            source,
        })?;
        if let Some(topics) = parse_topic_list(&response) {
            return Ok(TopicExtraction::new(unit, topics));
        }
        log::debug!("unparseable response for {unit} (attempt {})", attempt + 1);
    }
    log::warn!("no parseable topics for {unit} after retry; continuing with none");
    Ok(TopicExtraction::new(unit, Vec::new()))
}

/// Units of a corpus at the given level, in corpus order.
pub fn units(docs: &[Document], level: Level) -> Vec<(UnitRef, &str)> {
    match level {
        Level::Document => docs
            .iter()
            .map(|d| {
                (
                    UnitRef {
                        doc_id: d.id.clone(),
                        sentence: None,
                    },
                    d.text.as_str(),
                )
            })
            .collect(),
        Level::Sentence => docs
            .iter()
            .flat_map(|d| {
                d.sentences.iter().map(|s| {
                    (
                        UnitRef {
                            doc_id: d.id.clone(),
                            sentence: Some(s.index),
                        },
                        s.text.as_str(),
                    )
                })
            })
            .collect(),
    }
}

pub type ExtractionCache = JsonlCache<UnitRef, TopicExtraction>;

pub fn open_cache(path: impl AsRef<std::path::Path>) -> Result<ExtractionCache> {
    JsonlCache::open(path, |e: &TopicExtraction| e.source.clone())
}

/// Extracts every unit of the corpus, at most `max_concurrent` requests in
/// flight. Units already present in `cache` are not re-requested; new
/// results are appended to it even if other units fail.
pub fn extract_corpus(
    docs: &[Document],
    level: Level,
    chat: &dyn ChatModel,
    max_concurrent: usize,
    mut cache: Option<&mut ExtractionCache>,
) -> Result<Vec<TopicExtraction>> {
    let all = units(docs, level);
    let pending: Vec<&(UnitRef, &str)> = all
        .iter()
        .filter(|(u, _)| cache.as_ref().is_none_or(|c| c.get(u).is_none()))
        .collect();
    log::info!(
        "extracting topics for {} of {} {:?}-level units",
        pending.len(),
        all.len(),
        level
    );
    let results = run_bounded(&pending, max_concurrent, |(unit, text)| {
        extract_topics(unit.clone(), text, level, chat)
    })?;

    let mut fresh = Vec::with_capacity(results.len());
    let mut first_err = None;
    for r in results {
        match r {
            Ok(e) => fresh.push(e),
            Err(e) if first_err.is_none() => first_err = Some(e),
            Err(e) => log::warn!("{e}"),
        }
    }
    if let Some(c) = cache.as_deref_mut() {
        c.append(&fresh)?;
    }
    if let Some(e) = first_err {
        return Err(e);
    }

    let mut out: Vec<TopicExtraction> = match cache {
        Some(c) => all.iter().filter_map(|(u, _)| c.get(u).cloned()).collect(),
        None => fresh,
    };
    out.sort_by(|a, b| a.source.cmp(&b.source));
    Ok(out)
}

/// One hyperedge per distinct normalized topic over all documents in
/// `docs`. Extractions referring to documents outside `docs` are rejected.
pub fn assemble_topic_hot(
    extractions: &[TopicExtraction],
    docs: &[Document],
) -> Result<TextHypergraph> {
    let mut hot = document_nodes(docs)?;
    let mut tally = TopicTally::default();
    for ex in extractions {
        if !hot.contains_node(ex.source.doc_id.as_str()) {
            return Err(Error::input(format!(
                "extraction for unknown document `{}`",
                ex.source.doc_id
            )));
        }
        for surface in &ex.topics {
            if let Some(key) = normalize_topic(surface) {
                tally.add(surface, &key, [ex.source.doc_id.clone()]);
            }
        }
    }
    tally.into_hyperedges(&mut hot)?;
    Ok(hot)
}

/// Extraction followed by assembly.
pub fn build(
    docs: &[Document],
    level: Level,
    chat: &dyn ChatModel,
    max_concurrent: usize,
    cache: Option<&mut ExtractionCache>,
) -> Result<TextHypergraph> {
    let extractions = extract_corpus(docs, level, chat, max_concurrent, cache)?;
    assemble_topic_hot(&extractions, docs)
}
