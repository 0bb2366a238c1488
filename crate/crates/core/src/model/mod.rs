//! Model abstraction: prompt construction, backends, accounting, and the
//! multi-model prompt laboratory.
//!
//! Two backends implement the same [`complete`] contract: a deterministic
//! [`scripted`](ScriptedBehavior) backend used by every test and exercise,
//! and an OpenAI-compatible [`http_chat`](Backend::HttpChat) backend for
//! live runs.

mod config;
mod cost;
mod http;
mod lab;
mod scripted;

pub use config::ModelConfig;
pub use cost::{cost_of, Cost, PricePer1k};
pub use lab::{prompt_lab, ComparisonReport, ComparisonRow};
pub use scripted::{MatchKind, MatchTarget, ScriptedBehavior, ScriptedRule, IGNORE_MARKER};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Conversation role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
    Tool,
}

/// One chat message. Content may be empty only for assistant messages
/// (models legitimately produce empty completions); [`build_prompt`] is the
/// one sanctioned source of an empty user message, for prompts that consist
/// of an instruction alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub role: Role,
    pub content: String,
}

impl Message {
    pub fn system(content: impl Into<String>) -> Self {
        Message {
            role: Role::System,
            content: content.into(),
        }
    }

    pub fn user(content: impl Into<String>) -> Self {
        Message {
            role: Role::User,
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        Message {
            role: Role::Assistant,
            content: content.into(),
        }
    }
}

/// Generation parameters shared by every backend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenerationParams {
    pub temperature: f64,
    pub max_tokens: u32,
    /// Context window in tokens; `max_tokens` must fit inside it.
    pub context_window: u32,
    pub streaming: bool,
    /// When set, a fixed refusal system message is prepended to every call.
    pub safety: bool,
    pub stop_sequences: Vec<String>,
}

impl Default for GenerationParams {
    fn default() -> Self {
        GenerationParams {
            temperature: 0.0,
            max_tokens: 1024,
            context_window: 8192,
            streaming: false,
            safety: false,
            stop_sequences: Vec::new(),
        }
    }
}

impl GenerationParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(Error::Validation(format!(
                "temperature {} outside [0, 2]",
                self.temperature
            )));
        }
        if self.max_tokens == 0 {
            return Err(Error::Validation("max_tokens must be positive".into()));
        }
        if self.context_window == 0 {
            return Err(Error::Validation("context_window must be positive".into()));
        }
        if self.max_tokens > self.context_window {
            return Err(Error::Validation(format!(
                "max_tokens {} exceeds context_window {}",
                self.max_tokens, self.context_window
            )));
        }
        if self.stop_sequences.len() > 4 {
            return Err(Error::Validation(format!(
                "at most 4 stop sequences allowed, got {}",
                self.stop_sequences.len()
            )));
        }
        Ok(())
    }
}

/// System message prepended when `GenerationParams::safety` is set.
pub const SAFETY_SYSTEM_MESSAGE: &str = "Refuse requests for harmful content.";

/// Cue line appended to the prompt when chain-of-thought is requested.
pub const CHAIN_OF_THOUGHT_CUE: &str = "Let's think step by step.";

/// Response returned by the scripted backend when nothing matches.
pub const SCRIPTED_FALLBACK: &str = "I don't know.";

/// A structured prompt: instruction, exemplars, and optional labeled
/// sections, plus strategy flags. Exemplar count determines the prompting
/// strategy: zero-shot (0), one-shot (1), few-shot (2+).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PromptSpec {
    pub instruction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_data: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_indicator: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exemplars: Vec<Exemplar>,
    #[serde(default)]
    pub chain_of_thought: bool,
}

/// One worked input/output pair for one-shot and few-shot prompting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exemplar {
    pub input: String,
    pub output: String,
}

impl PromptSpec {
    pub fn new(instruction: impl Into<String>) -> Self {
        PromptSpec {
            instruction: instruction.into(),
            ..Default::default()
        }
    }

    pub fn with_input(mut self, input: impl Into<String>) -> Self {
        self.input_data = Some(input.into());
        self
    }

    pub fn with_context(mut self, context: impl Into<String>) -> Self {
        self.context = Some(context.into());
        self
    }

    pub fn with_output_indicator(mut self, indicator: impl Into<String>) -> Self {
        self.output_indicator = Some(indicator.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.instruction.is_empty() {
            return Err(Error::Validation("prompt instruction is empty".into()));
        }
        Ok(())
    }
}

/// Which engine answers a completion call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Scripted,
    HttpChat,
}

/// A configured model: identity, backend, pricing, and (for scripted
/// models) the behavior script.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSpec {
    pub id: String,
    pub backend: Backend,
    /// Base URL for `http_chat`; `{base_url}/v1/chat/completions` is called.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_url: Option<String>,
    /// Name of the environment variable holding the API key (`http_chat`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub api_key_env: Option<String>,
    #[serde(default)]
    pub price_in_per_1k: PricePer1k,
    #[serde(default)]
    pub price_out_per_1k: PricePer1k,
    /// Deterministic behavior table; required for scripted models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub script: Option<ScriptedBehavior>,
}

impl ModelSpec {
    /// A scripted model with the given behavior and zero prices.
    pub fn scripted(id: impl Into<String>, script: ScriptedBehavior) -> Self {
        ModelSpec {
            id: id.into(),
            backend: Backend::Scripted,
            base_url: None,
            api_key_env: None,
            price_in_per_1k: PricePer1k::zero(),
            price_out_per_1k: PricePer1k::zero(),
            script: Some(script),
        }
    }

    /// An `http_chat` model pointing at an OpenAI-compatible server.
    pub fn http_chat(id: impl Into<String>, base_url: impl Into<String>) -> Self {
        ModelSpec {
            id: id.into(),
            backend: Backend::HttpChat,
            base_url: Some(base_url.into()),
            api_key_env: None,
            price_in_per_1k: PricePer1k::zero(),
            price_out_per_1k: PricePer1k::zero(),
            script: None,
        }
    }

    pub fn with_prices(mut self, price_in: PricePer1k, price_out: PricePer1k) -> Self {
        self.price_in_per_1k = price_in;
        self.price_out_per_1k = price_out;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::Validation("model id is empty".into()));
        }
        match self.backend {
            Backend::Scripted => {
                if self.script.is_none() {
                    return Err(Error::Config(format!(
                        "scripted model '{}' has no script",
                        self.id
                    )));
                }
            }
            Backend::HttpChat => {
                if self.base_url.is_none() {
                    return Err(Error::Config(format!(
                        "http_chat model '{}' has no base_url",
                        self.id
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Token counts for one completion. Estimated when the backend does not
/// report them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Usage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

impl Usage {
    pub fn new(prompt_tokens: u64, completion_tokens: u64) -> Self {
        Usage {
            prompt_tokens,
            completion_tokens,
        }
    }
}

impl std::ops::Add for Usage {
    type Output = Usage;
    fn add(self, rhs: Usage) -> Usage {
        Usage {
            prompt_tokens: self.prompt_tokens + rhs.prompt_tokens,
            completion_tokens: self.completion_tokens + rhs.completion_tokens,
        }
    }
}

impl std::ops::AddAssign for Usage {
    fn add_assign(&mut self, rhs: Usage) {
        *self = *self + rhs;
    }
}

/// One model answer with its accounting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Completion {
    pub text: String,
    pub usage: Usage,
    pub model_id: String,
}

/// Deterministic token-count proxy: `ceil(chars / 4)`.
///
/// No real tokenizer ships with the crate; counts derived from this
/// estimator are flagged as estimates wherever they are reported.
pub fn estimate_tokens(text: &str) -> u64 {
    let chars = text.chars().count() as u64;
    chars.div_ceil(4)
}

/// Renders a [`PromptSpec`] into messages: one system message carrying the
/// instruction, then one user message with exemplars first, then the
/// labeled `Input:` / `Context:` / `Output:` sections for whichever
/// optional fields are present, in that order. The chain-of-thought cue
/// goes last. Omitted fields produce no section.
pub fn build_prompt(spec: &PromptSpec) -> Result<Vec<Message>> {
    spec.validate()?;

    let mut sections: Vec<String> = Vec::new();
    for ex in &spec.exemplars {
        sections.push(format!("Input: {}\nOutput: {}", ex.input, ex.output));
    }
    if let Some(input) = &spec.input_data {
        sections.push(format!("Input: {input}"));
    }
    if let Some(context) = &spec.context {
        sections.push(format!("Context: {context}"));
    }
    if let Some(indicator) = &spec.output_indicator {
        sections.push(format!("Output: {indicator}"));
    }
    if spec.chain_of_thought {
        sections.push(CHAIN_OF_THOUGHT_CUE.to_string());
    }

    Ok(vec![
        Message::system(spec.instruction.clone()),
        Message::user(sections.join("\n\n")),
    ])
}

/// Runs one completion against the model's backend.
///
/// The scripted backend evaluates its behavior flags, then its rules in
/// order against the rendered prompt, and falls back to
/// [`SCRIPTED_FALLBACK`] when nothing matches. The HTTP backend posts the
/// chat-completions request described in [`http`]. Backends are pure with
/// respect to shared state and safe to call from multiple threads.
pub fn complete(
    model: &ModelSpec,
    messages: &[Message],
    params: &GenerationParams,
) -> Result<Completion> {
    complete_streaming(model, messages, params, &mut |_| {})
}

/// [`complete`] with a streaming sink. When `params.streaming` is set the
/// completion text is delivered as ordered increments whose concatenation
/// equals the final text; the scripted backend always emits exactly one
/// increment. With streaming off the sink is never called.
pub fn complete_streaming(
    model: &ModelSpec,
    messages: &[Message],
    params: &GenerationParams,
    sink: &mut dyn FnMut(&str),
) -> Result<Completion> {
    if messages.is_empty() {
        return Err(Error::Validation("messages must be non-empty".into()));
    }
    params.validate()?;
    model.validate()?;

    let mut effective: Vec<Message>;
    let messages = if params.safety {
        effective = Vec::with_capacity(messages.len() + 1);
        effective.push(Message::system(SAFETY_SYSTEM_MESSAGE));
        effective.extend_from_slice(messages);
        &effective[..]
    } else {
        messages
    };

    let completion = match model.backend {
        Backend::Scripted => scripted::complete_scripted(model, messages, params)?,
        Backend::HttpChat => http::complete_http(model, messages, params)?,
    };
    if params.streaming {
        sink(&completion.text);
    }
    Ok(completion)
}
