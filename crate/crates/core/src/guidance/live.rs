use std::thread;
use std::time::Duration;

use reqwest::blocking::Client;
use serde::{Deserialize, Serialize};

use super::client::{ChatClient, ChatMessage, ClientError};

/// Environment variable holding the bearer token for live requests.
pub const API_KEY_ENV: &str = "EVOSYNTH_LLM_KEY";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LiveConfig {
    /// Full URL of the chat-completions endpoint.
    pub endpoint: String,
    pub model: String,
    pub timeout_secs: u64,
    pub max_retries: u32,
    pub backoff_ms: u64,
    pub temperature: f64,
}

impl Default for LiveConfig {
    fn default() -> Self {
        Self {
            endpoint: "https://openrouter.ai/api/v1/chat/completions".into(),
            model: "openai/gpt-4o-mini".into(),
            timeout_secs: 60,
            max_retries: 3,
            backoff_ms: 500,
            temperature: 0.7,
        }
    }
}

#[derive(Serialize)]
struct Request<'a> {
    model: &'a str,
    messages: &'a [ChatMessage],
    temperature: f64,
}

#[derive(Deserialize)]
struct Response {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ReplyMessage,
}

#[derive(Deserialize)]
struct ReplyMessage {
    content: Option<String>,
}

/// Blocking client for an OpenAI-compatible chat-completions endpoint.
pub struct LiveClient {
    http: Client,
    config: LiveConfig,
    key: Option<String>,
}

impl LiveClient {
    /// Reads the credential from [`API_KEY_ENV`].
    pub fn from_env(config: LiveConfig) -> Result<Self, ClientError> {
        let key = std::env::var(API_KEY_ENV).map_err(|_| ClientError::MissingKey(API_KEY_ENV))?;
        Self::with_key(config, Some(key))
    }

    /// `key = None` sends no Authorization header (local test servers).
    pub fn with_key(config: LiveConfig, key: Option<String>) -> Result<Self, ClientError> {
        let http = Client::builder()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build()
            .map_err(|e| ClientError::Http(e.to_string()))?;
        Ok(Self { http, config, key })
    }

    fn attempt(&self, messages: &[ChatMessage]) -> Result<String, Attempt> {
        let body = Request {
            model: &self.config.model,
            messages,
            temperature: self.config.temperature,
        };
        let mut req = self.http.post(&self.config.endpoint).json(&body);
        if let Some(key) = &self.key {
            req = req.bearer_auth(key);
        }
        let resp = req
            .send()
            .map_err(|e| Attempt::Retry(ClientError::Http(e.to_string())))?;
        let status = resp.status();
        let text = resp
            .text()
            .map_err(|e| Attempt::Retry(ClientError::Http(e.to_string())))?;
        if !status.is_success() {
            let err = ClientError::Status {
                status: status.as_u16(),
                body: text.chars().take(500).collect(),
            };
            // rate limits and server errors are worth another try
            return Err(if status.as_u16() == 429 || status.is_server_error() {
                Attempt::Retry(err)
            } else {
                Attempt::Fatal(err)
            });
        }
        let parsed: Response =
            serde_json::from_str(&text).map_err(|e| Attempt::Fatal(ClientError::Malformed(e.to_string())))?;
        parsed
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| Attempt::Fatal(ClientError::Malformed("no choices in response".into())))
    }
}

enum Attempt {
    Retry(ClientError),
    Fatal(ClientError),
}

impl ChatClient for LiveClient {
    fn send(&mut self, messages: &[ChatMessage]) -> Result<String, ClientError> {
        let mut delay = Duration::from_millis(self.config.backoff_ms);
        let mut attempt = 0;
        loop {
            match self.attempt(messages) {
                Ok(reply) => return Ok(reply),
                Err(Attempt::Fatal(e)) => return Err(e),
                Err(Attempt::Retry(e)) if attempt >= self.config.max_retries => return Err(e),
                Err(Attempt::Retry(_)) => {
                    thread::sleep(delay);
                    delay *= 2;
                    attempt += 1;
                }
            }
        }
    }
}
