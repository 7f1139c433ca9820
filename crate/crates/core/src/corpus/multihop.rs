//! Adapter for the public MultiHop-RAG release.
//!
//! The release ships `corpus.json` (an array of news articles with `title`,
//! `url` and `body`) and `MultiHopRAG.json` (an array of queries, each with
//! an `evidence_list` naming its supporting articles). Articles become
//! corpus records with ids `mh0000`, `mh0001`, ... in release order; each
//! query's distinct evidence articles become one relevance set.

use std::collections::{BTreeSet, HashMap};

use serde::Deserialize;

use super::CorpusRecord;
use crate::error::{Error, Result};
use crate::hot::NodeId;

#[derive(Debug, Deserialize)]
struct Article {
    #[serde(default)]
    title: String,
    #[serde(default)]
    url: String,
    body: String,
}

#[derive(Debug, Deserialize)]
struct Query {
    #[serde(default)]
    evidence_list: Vec<Evidence>,
}

#[derive(Debug, Deserialize)]
struct Evidence {
    #[serde(default)]
    title: String,
    #[serde(default)]
    url: String,
}

#[derive(Debug, Clone)]
pub struct MultiHopRelease {
    pub records: Vec<CorpusRecord>,
    pub relevance_sets: Vec<Vec<NodeId>>,
    /// Queries whose evidence resolved to fewer than two articles.
    pub dropped_queries: usize,
    /// Evidence entries matching no article by url or title.
    pub unresolved_evidence: usize,
}

pub fn article_id(index: usize) -> String {
    format!("mh{index:04}")
}

pub fn adapt(corpus_json: &[u8], queries_json: &[u8]) -> Result<MultiHopRelease> {
    let articles: Vec<Article> =
        serde_json::from_slice(corpus_json).map_err(|e| Error::from_json(e, None))?;
    let queries: Vec<Query> =
        serde_json::from_slice(queries_json).map_err(|e| Error::from_json(e, None))?;

    let mut by_url = HashMap::new();
    let mut by_title = HashMap::new();
    let records: Vec<CorpusRecord> = articles
        .into_iter()
        .enumerate()
        .map(|(i, a)| {
            let id = article_id(i);
            if !a.url.is_empty() {
                by_url.entry(a.url.clone()).or_insert_with(|| id.clone());
            }
            if !a.title.is_empty() {
                by_title
                    .entry(a.title.clone())
                    .or_insert_with(|| id.clone());
            }
            CorpusRecord {
                id,
                title: (!a.title.is_empty()).then_some(a.title),
                text: a.body,
            }
        })
        .collect();

    let mut relevance_sets = Vec::with_capacity(queries.len());
    let mut dropped_queries = 0;
    let mut unresolved_evidence = 0;
    for q in queries {
        let mut set = BTreeSet::new();
        for ev in &q.evidence_list {
            match by_url.get(&ev.url).or_else(|| by_title.get(&ev.title)) {
                Some(id) => {
                    set.insert(NodeId::new(id.clone()));
                }
                None => unresolved_evidence += 1,
            }
        }
        if set.len() >= 2 {
            relevance_sets.push(set.into_iter().collect());
        } else {
            dropped_queries += 1;
        }
    }

    Ok(MultiHopRelease {
        records,
        relevance_sets,
        dropped_queries,
        unresolved_evidence,
    })
}
