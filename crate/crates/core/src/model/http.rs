//! OpenAI-compatible chat-completions backend.
//!
//! Posts `{base_url}/v1/chat/completions` with the minimal body shape
//! accepted by OpenAI-style and Ollama-style servers and reads the first
//! choice. Usage is taken from the response when reported, estimated
//! otherwise.

use std::time::Duration;

use serde::Deserialize;
use serde_json::json;

use super::{estimate_tokens, Completion, GenerationParams, Message, ModelSpec, Usage};
use crate::{Error, Result};

const REQUEST_TIMEOUT: Duration = Duration::from_secs(30);
const EXCERPT_LEN: usize = 200;

#[derive(Debug, Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
    usage: Option<WireUsage>,
}

#[derive(Debug, Deserialize)]
struct Choice {
    message: WireMessage,
}

#[derive(Debug, Deserialize)]
struct WireMessage {
    content: Option<String>,
}

#[derive(Debug, Deserialize)]
struct WireUsage {
    prompt_tokens: Option<u64>,
    completion_tokens: Option<u64>,
}

fn excerpt(body: &str) -> String {
    let mut s: String = body.chars().take(EXCERPT_LEN).collect();
    if body.chars().count() > EXCERPT_LEN {
        s.push('…');
    }
    s
}

pub(crate) fn complete_http(
    model: &ModelSpec,
    messages: &[Message],
    params: &GenerationParams,
) -> Result<Completion> {
    let base = model
        .base_url
        .as_deref()
        .ok_or_else(|| Error::Config(format!("http_chat model '{}' has no base_url", model.id)))?
        .trim_end_matches('/');
    let url = format!("{base}/v1/chat/completions");

    let api_key = match &model.api_key_env {
        Some(var) => Some(std::env::var(var).map_err(|_| {
            Error::Config(format!(
                "model '{}' requires API key from unset environment variable {var}",
                model.id
            ))
        })?),
        None => None,
    };

    let body = json!({
        "model": model.id,
        "messages": messages
            .iter()
            .map(|m| json!({"role": m.role, "content": m.content}))
            .collect::<Vec<_>>(),
        "temperature": params.temperature,
        "max_tokens": params.max_tokens,
        "stream": false,
    });

    let client = reqwest::blocking::Client::builder()
        .timeout(REQUEST_TIMEOUT)
        .build()
        .map_err(|e| Error::Http(e.to_string()))?;
    let mut request = client.post(&url).json(&body);
    if let Some(key) = api_key {
        request = request.header("Authorization", format!("Bearer {key}"));
    }

    let response = request.send().map_err(|e| Error::Http(e.to_string()))?;
    let status = response.status().as_u16();
    let text = response.text().map_err(|e| Error::Http(e.to_string()))?;
    if !(200..300).contains(&status) {
        return Err(Error::Backend {
            status,
            excerpt: excerpt(&text),
        });
    }

    let parsed: ChatResponse = serde_json::from_str(&text).map_err(|_| Error::Backend {
        status,
        excerpt: excerpt(&text),
    })?;
    let content = parsed
        .choices
        .first()
        .and_then(|c| c.message.content.clone())
        .ok_or_else(|| Error::Backend {
            status,
            excerpt: excerpt(&text),
        })?;

    let prompt_estimate = || {
        estimate_tokens(
            &messages
                .iter()
                .map(|m| m.content.as_str())
                .collect::<Vec<_>>()
                .join("\n"),
        )
    };
    let usage = match parsed.usage {
        Some(u) => Usage::new(
            u.prompt_tokens.unwrap_or_else(prompt_estimate),
            u.completion_tokens
                .unwrap_or_else(|| estimate_tokens(&content)),
        ),
        None => Usage::new(prompt_estimate(), estimate_tokens(&content)),
    };

    Ok(Completion {
        text: content,
        usage,
        model_id: model.id.clone(),
    })
}
