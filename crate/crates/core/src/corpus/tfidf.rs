//! Corpus-level term statistics.
//!
//! Weighting is raw term count times `ln(N / df)`, unsmoothed, so a term
//! present in every document scores zero.

use std::collections::{BTreeMap, HashMap};

use super::{Document, Sentence};
use crate::error::{Error, Result};
use crate::hot::NodeId;

/// Postings entry: document position and in-document count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Posting {
    pub doc: u32,
    pub count: u32,
}

#[derive(Debug, Clone)]
pub struct TfIdfStats {
    doc_ids: Vec<NodeId>,
    doc_index: HashMap<NodeId, u32>,
    postings: BTreeMap<String, Vec<Posting>>,
    term_counts: Vec<HashMap<String, u32>>,
}

impl TfIdfStats {
    /// Single pass over the documents' sentence tokens.
    pub fn from_documents(docs: &[Document]) -> Self {
        let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
        let mut term_counts = Vec::with_capacity(docs.len());
        for (d, doc) in docs.iter().enumerate() {
            let mut counts: HashMap<String, u32> = HashMap::new();
            for tok in doc.tokens() {
                *counts.entry(tok.clone()).or_default() += 1;
            }
            for (term, &count) in &counts {
                postings.entry(term.clone()).or_default().push(Posting {
                    doc: d as u32,
                    count,
                });
            }
            term_counts.push(counts);
        }
        TfIdfStats {
            doc_ids: docs.iter().map(|d| d.id.clone()).collect(),
            doc_index: docs
                .iter()
                .enumerate()
                .map(|(i, d)| (d.id.clone(), i as u32))
                .collect(),
            postings,
            term_counts,
        }
    }

    pub fn doc_count(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn doc_id(&self, doc: u32) -> &NodeId {
        &self.doc_ids[doc as usize]
    }

    /// Vocabulary in lexicographic order.
    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }

    pub fn vocabulary_len(&self) -> usize {
        self.postings.len()
    }

    /// Documents containing `term`, in document order.
    pub fn postings(&self, term: &str) -> Option<&[Posting]> {
        self.postings.get(term).map(Vec::as_slice)
    }

    pub fn df(&self, term: &str) -> Option<usize> {
        self.postings.get(term).map(Vec::len)
    }

    pub fn tf(&self, term: &str, doc: &str) -> Result<u32> {
        let d = self.doc_position(doc)?;
        Ok(self.term_counts[d as usize].get(term).copied().unwrap_or(0))
    }

    /// `ln(N / df)`, or `None` for out-of-vocabulary terms.
    pub fn idf(&self, term: &str) -> Option<f64> {
        self.df(term)
            .map(|df| (self.doc_count() as f64 / df as f64).ln())
    }

    pub fn tfidf(&self, term: &str, doc: &str) -> Result<f64> {
        let idf = self
            .idf(term)
            .ok_or_else(|| Error::input(format!("term `{term}` is not in the vocabulary")))?;
        Ok(self.tf(term, doc)? as f64 * idf)
    }

    pub(crate) fn doc_position(&self, doc: &str) -> Result<u32> {
        self.doc_index
            .get(doc)
            .copied()
            .ok_or_else(|| Error::input(format!("unknown document `{doc}`")))
    }
}

/// Mean TF-IDF weight of a sentence.
///
/// The sentence vector counts terms within the sentence and weights them by
/// corpus IDF, so the sum of its entries equals the sum of per-token IDF;
/// the divisor is the token count including repeats. Out-of-vocabulary
/// tokens weigh zero and an empty sentence scores zero.
pub fn sentence_score(sentence: &Sentence, stats: &TfIdfStats) -> f64 {
    token_score(&sentence.tokens, stats)
}

pub(crate) fn token_score(tokens: &[String], stats: &TfIdfStats) -> f64 {
    if tokens.is_empty() {
        return 0.0;
    }
    let total: f64 = tokens.iter().map(|t| stats.idf(t).unwrap_or(0.0)).sum();
    total / tokens.len() as f64
}
