//! Document ingestion, sentence segmentation, tokenization and TF-IDF.

pub mod multihop;
mod segment;
mod tfidf;
mod tokenize;

use std::collections::HashSet;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hot::{Node, NodeId, TextHypergraph};

pub use segment::segment_sentences;
pub use tfidf::{sentence_score, Posting, TfIdfStats};
pub use tokenize::{tokenize, Tokenizer};

#[derive(Debug, Clone, PartialEq)]
pub struct Sentence {
    pub doc_id: NodeId,
    pub index: usize,
    pub text: String,
    pub tokens: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: NodeId,
    pub title: String,
    pub text: String,
    pub sentences: Vec<Sentence>,
}

impl Document {
    /// Segments and tokenizes `text`.
    pub fn new(
        id: impl Into<NodeId>,
        title: impl Into<String>,
        text: impl Into<String>,
        tokenizer: &Tokenizer,
    ) -> Self {
        let id = id.into();
        let text = text.into();
        let sentences = segment_sentences(&text)
            .into_iter()
            .enumerate()
            .map(|(index, s)| Sentence {
                doc_id: id.clone(),
                index,
                tokens: tokenizer.tokenize(&s),
                text: s,
            })
            .collect();
        Document {
            id,
            title: title.into(),
            text,
            sentences,
        }
    }

    /// Document token stream: sentence tokens in order.
    pub fn tokens(&self) -> impl Iterator<Item = &String> {
        self.sentences.iter().flat_map(|s| s.tokens.iter())
    }
}

/// One line of the corpus JSON Lines format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub text: String,
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub documents: Vec<Document>,
    /// Records dropped because their text was empty.
    pub skipped_empty: usize,
}

/// Reads JSON Lines corpus records into documents, preserving order.
///
/// Blank lines are ignored. Records with empty text are skipped and
/// counted. A repeated id or a malformed record is an error.
pub fn ingest<R: BufRead>(source: R, tokenizer: &Tokenizer) -> Result<Ingested> {
    let mut documents = Vec::new();
    let mut seen = HashSet::new();
    let mut skipped_empty = 0;
    let mut record = 0usize;
    for (line_no, line) in source.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CorpusRecord = serde_json::from_str(&line).map_err(|e| {
            let mut err = Error::from_json(e, Some(record));
            if let Error::Parse { location, .. } = &mut err {
                location.line = line_no + 1;
            }
            err
        })?;
        record += 1;
        if rec.id.is_empty() {
            return Err(Error::input(format!(
                "record {} has an empty id",
                record - 1
            )));
        }
        if !seen.insert(rec.id.clone()) {
            return Err(Error::DuplicateId(rec.id));
        }
        if rec.text.trim().is_empty() {
            skipped_empty += 1;
            continue;
        }
        documents.push(Document::new(
            rec.id,
            rec.title.unwrap_or_default(),
            rec.text,
            tokenizer,
        ));
    }
    if skipped_empty > 0 {
        log::warn!("skipped {skipped_empty} corpus records with empty text");
    }
    Ok(Ingested {
        documents,
        skipped_empty,
    })
}

pub fn ingest_path(path: impl AsRef<std::path::Path>, tokenizer: &Tokenizer) -> Result<Ingested> {
    let file = std::fs::File::open(path)?;
    ingest(std::io::BufReader::new(file), tokenizer)
}

/// Hypergraph with one node per document and no hyperedges.
pub fn document_nodes(docs: &[Document]) -> Result<TextHypergraph> {
    let mut hot = TextHypergraph::new();
    for d in docs {
        hot.add_node(d.id.clone(), Node::titled(d.title.clone(), d.text.clone()))?;
    }
    Ok(hot)
}
