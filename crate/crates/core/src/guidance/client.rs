use std::collections::VecDeque;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        Self {
            role: Role::System,
            content: content.into(),
        }
    }

    pub fn user(content: impl Into<String>) -> Self {
        Self {
            role: Role::User,
            content: content.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("mock script exhausted after {0} responses")]
    ScriptExhausted(usize),
    #[error("http error: {0}")]
    Http(String),
    #[error("endpoint returned status {status}: {body}")]
    Status { status: u16, body: String },
    #[error("malformed response: {0}")]
    Malformed(String),
    #[error("missing credential: set {0}")]
    MissingKey(&'static str),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// A chat-completion backend.
pub trait ChatClient: Send {
    fn send(&mut self, messages: &[ChatMessage]) -> Result<String, ClientError>;
}

/// Replays a fixed list of responses in order and records every prompt.
#[derive(Debug, Clone, Default)]
pub struct MockClient {
    responses: VecDeque<String>,
    served: usize,
    prompts: Vec<Vec<ChatMessage>>,
}

impl MockClient {
    pub fn new<I, S>(responses: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            responses: responses.into_iter().map(Into::into).collect(),
            served: 0,
            prompts: Vec::new(),
        }
    }

    /// Parses a script: responses separated by lines that contain only
    /// `---`. Surrounding blank lines are trimmed from each response.
    pub fn from_script(text: &str) -> Self {
        let mut responses = Vec::new();
        let mut current = String::new();
        for line in text.lines() {
            if line.trim_end() == "---" {
                responses.push(std::mem::take(&mut current));
            } else {
                current.push_str(line);
                current.push('\n');
            }
        }
        if !current.trim().is_empty() {
            responses.push(current);
        }
        Self::new(responses.into_iter().map(|r| r.trim_matches('\n').to_string()))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, ClientError> {
        Ok(Self::from_script(&std::fs::read_to_string(path)?))
    }

    pub fn remaining(&self) -> usize {
        self.responses.len()
    }

    /// Every message sequence sent so far, in order.
    pub fn prompts(&self) -> &[Vec<ChatMessage>] {
        &self.prompts
    }
}

impl ChatClient for MockClient {
    fn send(&mut self, messages: &[ChatMessage]) -> Result<String, ClientError> {
        self.prompts.push(messages.to_vec());
        let reply = self
            .responses
            .pop_front()
            .ok_or(ClientError::ScriptExhausted(self.served))?;
        self.served += 1;
        Ok(reply)
    }
}
