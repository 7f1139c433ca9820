use std::collections::HashSet;
use std::path::Path;
use std::sync::LazyLock;

use crate::error::Result;

const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords_en.txt");

static DEFAULT: LazyLock<Tokenizer> = LazyLock::new(Tokenizer::default);

/// Lowercasing word tokenizer with a fixed stopword list.
///
/// Text is lowercased and split on every run of non-alphanumeric
/// characters. Tokens shorter than two characters, tokens made only of
/// digits, and stopwords are dropped.
#[derive(Debug, Clone)]
pub struct Tokenizer {
    stopwords: HashSet<String>,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Self::from_stopword_list(DEFAULT_STOPWORDS)
    }
}

impl Tokenizer {
    /// Parses a stopword list: one word per line, `#` starts a comment line.
    pub fn from_stopword_list(list: &str) -> Self {
        let stopwords = list
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        Tokenizer { stopwords }
    }

    pub fn from_stopword_file(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self::from_stopword_list(&std::fs::read_to_string(path)?))
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(word)
    }

    pub fn tokenize(&self, text: &str) -> Vec<String> {
        text.to_lowercase()
            .split(|c: char| !c.is_alphanumeric())
            .filter(|t| self.keep(t))
            .map(str::to_owned)
            .collect()
    }

    fn keep(&self, token: &str) -> bool {
        token.chars().nth(1).is_some()
            && !token.chars().all(char::is_numeric)
            && !self.stopwords.contains(token)
    }
}

/// Tokenizes with the built-in stopword list.
pub fn tokenize(text: &str) -> Vec<String> {
    DEFAULT.tokenize(text)
}
