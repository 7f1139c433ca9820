//! Deterministic offline providers.

use std::collections::HashMap;

use super::{ChatMessage, ChatModel, Embedder};
use crate::construct::topics::{split_pair_prompt, split_unit_prompt};
use crate::corpus::{TfIdfStats, Tokenizer};
use crate::error::ProviderError;

/// Chat model answering from corpus statistics.
///
/// Topic prompts get the two highest-TF-IDF tokens of the unit text that
/// occur in at least two corpus documents (ties broken alphabetically),
/// falling back to any token when none is shared. Pair prompts get the shared token with the
/// highest combined weight, falling back to the top token of the first
/// sentence. Answers are JSON arrays.
pub struct TfIdfMockChat {
    stats: TfIdfStats,
    tokenizer: Tokenizer,
}

impl TfIdfMockChat {
    pub fn new(stats: TfIdfStats, tokenizer: Tokenizer) -> Self {
        TfIdfMockChat { stats, tokenizer }
    }

    fn ranked(&self, text: &str) -> Vec<(String, f64)> {
        let mut counts: HashMap<String, u32> = HashMap::new();
        for t in self.tokenizer.tokenize(text) {
            *counts.entry(t).or_default() += 1;
        }
        let mut scored: Vec<(String, f64)> = counts
            .into_iter()
            .map(|(t, c)| {
                let w = c as f64 * self.stats.idf(&t).unwrap_or(0.0);
                (t, w)
            })
            .collect();
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        scored
    }

    fn answer(&self, prompt: &str) -> Vec<String> {
        if let Some((a, b)) = split_pair_prompt(prompt) {
            let ra = self.ranked(a);
            let rb: HashMap<String, f64> = self.ranked(b).into_iter().collect();
            let mut shared: Vec<(String, f64)> = ra
                .iter()
                .filter_map(|(t, w)| rb.get(t).map(|w2| (t.clone(), w + w2)))
                .collect();
            shared.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
            return shared
                .into_iter()
                .chain(ra)
                .map(|(t, _)| t)
                .take(1)
                .collect();
        }
        let text = split_unit_prompt(prompt).unwrap_or(prompt);
        let ranked = self.ranked(text);
        let shared: Vec<String> = ranked
            .iter()
            .filter(|(t, _)| self.stats.df(t).is_some_and(|df| df >= 2))
            .map(|(t, _)| t.clone())
            .take(2)
            .collect();
        if shared.is_empty() {
            ranked.into_iter().take(2).map(|(t, _)| t).collect()
        } else {
            shared
        }
    }
}

impl ChatModel for TfIdfMockChat {
    fn model_name(&self) -> &str {
        "mock-tfidf"
    }

    fn complete(&self, messages: &[ChatMessage]) -> Result<String, ProviderError> {
        let prompt = messages
            .iter()
            .rev()
            .find(|m| m.role == "user")
            .map(|m| m.content.as_str())
            .unwrap_or("");
        Ok(serde_json::to_string(&self.answer(prompt)).expect("strings serialize"))
    }
}

/// Wraps a closure as a chat model.
pub struct FnChat<F> {
    name: String,
    f: F,
}

impl<F> FnChat<F>
where
    F: Fn(&[ChatMessage]) -> Result<String, ProviderError> + Send + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnChat {
            name: name.into(),
            f,
        }
    }
}

impl<F> ChatModel for FnChat<F>
where
    F: Fn(&[ChatMessage]) -> Result<String, ProviderError> + Send + Sync,
{
    fn model_name(&self) -> &str {
        &self.name
    }

    fn complete(&self, messages: &[ChatMessage]) -> Result<String, ProviderError> {
        (self.f)(messages)
    }
}

/// Seeded random-projection embedder.
///
/// Each token maps to a pseudo-random vector derived from `(seed, token)`;
/// a text's embedding is the normalized sum over its tokens (or over the
/// whole text when it has none). Texts sharing tokens therefore have
/// positive cosine similarity.
#[derive(Debug, Clone)]
pub struct HashEmbedder {
    dim: usize,
    seed: u64,
    tokenizer: Tokenizer,
}

impl HashEmbedder {
    pub fn new(dim: usize, seed: u64) -> Self {
        HashEmbedder {
            dim,
            seed,
            tokenizer: Tokenizer::default(),
        }
    }

    pub fn embed_one(&self, text: &str) -> Vec<f32> {
        let mut features = self.tokenizer.tokenize(text);
        if features.is_empty() {
            features.push(text.to_owned());
        }
        let mut acc = vec![0f64; self.dim];
        for f in &features {
            let mut state = fnv1a(self.seed, f.as_bytes());
            for slot in acc.iter_mut() {
                state = splitmix64(state);
                // uniform in [-1, 1)
                *slot += (state >> 11) as f64 / (1u64 << 52) as f64 - 1.0;
            }
        }
        let norm = acc.iter().map(|x| x * x).sum::<f64>().sqrt();
        acc.iter().map(|x| (x / norm) as f32).collect()
    }
}

impl Default for HashEmbedder {
    fn default() -> Self {
        HashEmbedder::new(32, 0)
    }
}

impl Embedder for HashEmbedder {
    fn model_name(&self) -> &str {
        "mock-hash-projection"
    }

    fn embed(&self, inputs: &[String]) -> Result<Vec<Vec<f32>>, ProviderError> {
        Ok(inputs.iter().map(|t| self.embed_one(t)).collect())
    }
}

fn fnv1a(seed: u64, bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ seed;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
