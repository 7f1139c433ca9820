//! Pluggable chat-completion and embedding backends.
//!
//! Construction code talks to the [`ChatModel`] and [`Embedder`] traits.
//! HTTP implementations live in [`http`]; seeded deterministic stand-ins in
//! [`mock`] make whole pipelines reproducible without a network.

mod cache;
pub mod http;
pub mod mock;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ProviderError, Result};

pub use cache::JsonlCache;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        ChatMessage {
            role: "system".into(),
            content: content.into(),
        }
    }

    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage {
            role: "user".into(),
            content: content.into(),
        }
    }
}

pub trait ChatModel: Send + Sync {
    fn model_name(&self) -> &str;

    /// Returns the assistant message content.
    fn complete(&self, messages: &[ChatMessage]) -> Result<String, ProviderError>;
}

pub trait Embedder: Send + Sync {
    fn model_name(&self) -> &str;

    /// One vector per input, in input order.
    fn embed(&self, inputs: &[String]) -> Result<Vec<Vec<f32>>, ProviderError>;
}

impl<T: ChatModel + ?Sized> ChatModel for &T {
    fn model_name(&self) -> &str {
        (**self).model_name()
    }
    fn complete(&self, messages: &[ChatMessage]) -> Result<String, ProviderError> {
        (**self).complete(messages)
    }
}

impl<T: Embedder + ?Sized> Embedder for &T {
    fn model_name(&self) -> &str {
        (**self).model_name()
    }
    fn embed(&self, inputs: &[String]) -> Result<Vec<Vec<f32>>, ProviderError> {
        (**self).embed(inputs)
    }
}

fn default_timeout_secs() -> u64 {
    60
}
fn default_concurrency() -> usize {
    4
}
fn default_retries() -> u32 {
    2
}

/// Connection settings for an HTTP backend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderConfig {
    /// Full URL requests are POSTed to.
    pub endpoint: String,
    pub model: String,
    /// Name of the environment variable holding a bearer token, if any.
    #[serde(default)]
    pub api_key_env: Option<String>,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    #[serde(default = "default_concurrency")]
    pub max_concurrent: usize,
    /// Sampling temperature for chat models; ignored by embedders.
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
}

impl ProviderConfig {
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>) -> Self {
        ProviderConfig {
            endpoint: endpoint.into(),
            model: model.into(),
            api_key_env: None,
            timeout_secs: default_timeout_secs(),
            max_concurrent: default_concurrency(),
            temperature: 0.0,
            max_retries: default_retries(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.endpoint.is_empty() {
            return Err(Error::config("provider endpoint is empty"));
        }
        if self.timeout_secs == 0 {
            return Err(Error::config("provider timeout must be positive"));
        }
        if self.max_concurrent == 0 {
            return Err(Error::config("provider concurrency must be at least 1"));
        }
        Ok(())
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs(self.timeout_secs)
    }
}

/// Runs `f` over `items` on at most `max_concurrent` worker threads,
/// returning results in input order.
pub(crate) fn run_bounded<T, R, F>(items: &[T], max_concurrent: usize, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(max_concurrent.max(1))
        .build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}
