//! JSON-over-HTTP backends.
//!
//! Chat: POST `{"model", "messages", "temperature"}` and read
//! `choices[0].message.content` (OpenAI-compatible) or `message.content`.
//! Embeddings: POST `{"model", "inputs": [..]}` and read `{"vectors": [[..]]}`.

use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{ChatMessage, ChatModel, Embedder, ProviderConfig};
use crate::error::{ProviderError, Result};

struct Client {
    config: ProviderConfig,
    agent: ureq::Agent,
    api_key: Option<String>,
}

impl Client {
    fn new(config: ProviderConfig) -> Result<Self> {
        config.validate()?;
        let api_key = match &config.api_key_env {
            Some(var) => Some(std::env::var(var).map_err(|_| crate::Error::Provider {
                unit: "configuration".into(),
                source: ProviderError::MissingCredential(var.clone()),
            })?),
            None => None,
        };
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout()))
            .http_status_as_error(false)
            .build()
            .into();
        Ok(Client {
            config,
            agent,
            api_key,
        })
    }

    /// POSTs `body`, retrying transport failures and 5xx/429 responses.
    fn post(&self, body: &impl Serialize) -> Result<Value, ProviderError> {
        let mut attempt = 0;
        loop {
            match self.post_once(body) {
                Ok(v) => return Ok(v),
                Err((err, retryable)) if retryable && attempt < self.config.max_retries => {
                    attempt += 1;
                    log::debug!("retrying {} after: {err}", self.config.endpoint);
                    thread::sleep(Duration::from_millis(200 * u64::from(attempt)));
                }
                Err((err, _)) => return Err(err),
            }
        }
    }

    fn post_once(&self, body: &impl Serialize) -> Result<Value, (ProviderError, bool)> {
        let mut req = self.agent.post(&self.config.endpoint);
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req
            .send_json(body)
            .map_err(|e| (ProviderError::Transport(e.to_string()), true))?;
        let status = resp.status().as_u16();
        if status >= 400 {
            let retryable = status == 429 || status >= 500;
            let text = resp.body_mut().read_to_string().unwrap_or_default();
            return Err((
                ProviderError::Transport(format!("HTTP {status}: {}", truncate(&text, 200))),
                retryable,
            ));
        }
        resp.body_mut()
            .read_json::<Value>()
            .map_err(|e| (ProviderError::Response(e.to_string()), false))
    }
}

fn truncate(s: &str, max: usize) -> &str {
    match s.char_indices().nth(max) {
        Some((i, _)) => &s[..i],
        None => s,
    }
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: &'a [ChatMessage],
    temperature: f64,
}

pub struct HttpChatModel {
    client: Client,
}

impl HttpChatModel {
    pub fn new(config: ProviderConfig) -> Result<Self> {
        Ok(HttpChatModel {
            client: Client::new(config)?,
        })
    }

    pub fn config(&self) -> &ProviderConfig {
        &self.client.config
    }
}

impl ChatModel for HttpChatModel {
    fn model_name(&self) -> &str {
        &self.client.config.model
    }

    fn complete(&self, messages: &[ChatMessage]) -> Result<String, ProviderError> {
        let body = ChatRequest {
            model: &self.client.config.model,
            messages,
            temperature: self.client.config.temperature,
        };
        let v = self.client.post(&body)?;
        v.pointer("/choices/0/message/content")
            .or_else(|| v.pointer("/message/content"))
            .and_then(Value::as_str)
            .map(str::to_owned)
            .ok_or_else(|| ProviderError::Response("no message content in response".into()))
    }
}

#[derive(Serialize)]
struct EmbedRequest<'a> {
    model: &'a str,
    inputs: &'a [String],
}

#[derive(Deserialize)]
struct EmbedResponse {
    vectors: Vec<Vec<f32>>,
}

pub struct HttpEmbedder {
    client: Client,
}

impl HttpEmbedder {
    pub fn new(config: ProviderConfig) -> Result<Self> {
        Ok(HttpEmbedder {
            client: Client::new(config)?,
        })
    }

    pub fn config(&self) -> &ProviderConfig {
        &self.client.config
    }
}

impl Embedder for HttpEmbedder {
    fn model_name(&self) -> &str {
        &self.client.config.model
    }

    fn embed(&self, inputs: &[String]) -> Result<Vec<Vec<f32>>, ProviderError> {
        let body = EmbedRequest {
            model: &self.client.config.model,
            inputs,
        };
        let v = self.client.post(&body)?;
        let resp: EmbedResponse =
            serde_json::from_value(v).map_err(|e| ProviderError::Response(e.to_string()))?;
        if resp.vectors.len() != inputs.len() {
            return Err(ProviderError::Response(format!(
                "expected {} vectors, got {}",
                inputs.len(),
                resp.vectors.len()
            )));
        }
        Ok(resp.vectors)
    }
}
