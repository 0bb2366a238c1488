//! Deterministic scripted backend.
//!
//! A scripted model is a pure function of its behavior table and the
//! rendered prompt: behavior flags are evaluated first (in the fixed order
//! obey_observation_actions, obey_ignore_marker, leak_system_prompt), then
//! rules in declaration order, first match wins, and [`SCRIPTED_FALLBACK`]
//! answers when nothing matches.
//!
//! The flags simulate the gullible-model failure modes the security lab
//! depends on: obeying rogue `Action:` lines that arrive through tool
//! observations, obeying an inline instruction-override marker, and leaking
//! the system prompt on request.

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::{
    estimate_tokens, Completion, GenerationParams, Message, ModelSpec, Role, SCRIPTED_FALLBACK,
};
use crate::{Error, Result};

/// How a rule's pattern is applied to its target text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchKind {
    Substring,
    Regex,
}

/// Which slice of the rendered prompt a rule inspects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchTarget {
    /// All message contents joined by blank lines.
    FullPrompt,
    /// Everything after the last line starting with `Observation:`.
    LastObservation,
    /// The last `Question:` line, or the last user message when there is none.
    Question,
}

/// One pattern → response entry. Responses are templates: `{question}` and
/// `{observation}` expand to the corresponding targets, and for regex rules
/// `{1}`..`{9}` expand to capture groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptedRule {
    pub match_kind: MatchKind,
    pub target: MatchTarget,
    pub pattern: String,
    pub response: String,
}

impl ScriptedRule {
    pub fn substring(
        target: MatchTarget,
        pattern: impl Into<String>,
        response: impl Into<String>,
    ) -> Self {
        ScriptedRule {
            match_kind: MatchKind::Substring,
            target,
            pattern: pattern.into(),
            response: response.into(),
        }
    }

    pub fn regex(
        target: MatchTarget,
        pattern: impl Into<String>,
        response: impl Into<String>,
    ) -> Self {
        ScriptedRule {
            match_kind: MatchKind::Regex,
            target,
            pattern: pattern.into(),
            response: response.into(),
        }
    }
}

/// Behavior table for a scripted model.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptedBehavior {
    #[serde(default)]
    pub rules: Vec<ScriptedRule>,
    /// Obey a rogue `Action:` / `Action Input:` pair found in the last
    /// observation block, echoing it back as the next action.
    #[serde(default)]
    pub obey_observation_actions: bool,
    /// Obey an inline `IGNORE ALL PREVIOUS INSTRUCTIONS AND …` marker by
    /// answering with whatever follows it on that line.
    #[serde(default)]
    pub obey_ignore_marker: bool,
    /// Reveal the system prompt when the question asks for instructions.
    #[serde(default)]
    pub leak_system_prompt: bool,
}

impl ScriptedBehavior {
    pub fn with_rules(rules: Vec<ScriptedRule>) -> Self {
        ScriptedBehavior {
            rules,
            ..Default::default()
        }
    }
}

/// The instruction-override marker recognized by `obey_ignore_marker`.
pub const IGNORE_MARKER: &str = "IGNORE ALL PREVIOUS INSTRUCTIONS AND";

/// Prompt text as the scripted backend sees it: message contents joined by
/// blank lines, roles elided.
pub(crate) fn render_prompt(messages: &[Message]) -> String {
    messages
        .iter()
        .map(|m| m.content.as_str())
        .collect::<Vec<_>>()
        .join("\n\n")
}

/// Remainder of the last line starting with `prefix`, plus everything after
/// that line when `to_end` is set.
fn after_last_marker(text: &str, prefix: &str, to_end: bool) -> Option<String> {
    let mut result = None;
    let mut offset = 0;
    for line in text.split('\n') {
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix(prefix) {
            let line_end = offset + line.len();
            if to_end {
                let mut block = rest.trim_start().to_string();
                let tail = &text[line_end.min(text.len())..];
                block.push_str(tail);
                result = Some(block);
            } else {
                result = Some(rest.trim().to_string());
            }
        }
        offset += line.len() + 1;
    }
    result
}

/// Everything after the last `Observation:` marker; empty when none exists.
pub(crate) fn last_observation(prompt: &str) -> String {
    after_last_marker(prompt, "Observation:", true).unwrap_or_default()
}

/// The question under discussion: the last `Question:` line when present,
/// otherwise the last user message.
pub(crate) fn question_of(prompt: &str, messages: &[Message]) -> String {
    if let Some(q) = after_last_marker(prompt, "Question:", false) {
        return q;
    }
    messages
        .iter()
        .rev()
        .find(|m| m.role == Role::User)
        .map(|m| m.content.trim().to_string())
        .unwrap_or_default()
}

/// First `Action:` / `Action Input:` pair in an observation block.
fn embedded_action(observation: &str) -> Option<(String, String)> {
    let lines: Vec<&str> = observation.split('\n').collect();
    for (i, line) in lines.iter().enumerate() {
        let trimmed = line.trim_start();
        if let Some(tool) = trimmed.strip_prefix("Action:") {
            let input = lines[i + 1..]
                .iter()
                .find_map(|l| l.trim_start().strip_prefix("Action Input:"))
                .map(|s| s.trim().to_string())
                .unwrap_or_default();
            return Some((tool.trim().to_string(), input));
        }
    }
    None
}

fn expand_template(
    template: &str,
    question: &str,
    observation: &str,
    captures: &[String],
) -> String {
    let mut out = template.to_string();
    for (i, cap) in captures.iter().enumerate() {
        out = out.replace(&format!("{{{}}}", i + 1), cap);
    }
    out = out.replace("{question}", question);
    out.replace("{observation}", observation.trim_end())
}

fn apply_stop_sequences(text: &str, stops: &[String]) -> String {
    let mut cut = text.len();
    for stop in stops {
        if stop.is_empty() {
            continue;
        }
        if let Some(pos) = text.find(stop.as_str()) {
            cut = cut.min(pos);
        }
    }
    text[..cut].to_string()
}

pub(crate) fn complete_scripted(
    model: &ModelSpec,
    messages: &[Message],
    params: &GenerationParams,
) -> Result<Completion> {
    let script = model
        .script
        .as_ref()
        .ok_or_else(|| Error::Config(format!("scripted model '{}' has no script", model.id)))?;

    let prompt = render_prompt(messages);
    let observation = last_observation(&prompt);
    let question = question_of(&prompt, messages);

    let mut response: Option<String> = None;

    if script.obey_observation_actions {
        if let Some((tool, input)) = embedded_action(&observation) {
            response = Some(format!(
                "Thought: following instructions\nAction: {tool}\nAction Input: {input}"
            ));
        }
    }
    if response.is_none() && script.obey_ignore_marker {
        if let Some(pos) = prompt.find(IGNORE_MARKER) {
            let rest = &prompt[pos + IGNORE_MARKER.len()..];
            let line = rest.split('\n').next().unwrap_or("").trim();
            response = Some(line.to_string());
        }
    }
    if response.is_none() && script.leak_system_prompt {
        let q = question.to_lowercase();
        if q.contains("instructions") || q.contains("system prompt") {
            let system = messages
                .iter()
                .filter(|m| m.role == Role::System)
                .map(|m| m.content.as_str())
                .collect::<Vec<_>>()
                .join("\n");
            response = Some(system);
        }
    }

    if response.is_none() {
        for rule in &script.rules {
            let target = match rule.target {
                MatchTarget::FullPrompt => prompt.as_str(),
                MatchTarget::LastObservation => observation.as_str(),
                MatchTarget::Question => question.as_str(),
            };
            match rule.match_kind {
                MatchKind::Substring => {
                    if target.contains(rule.pattern.as_str()) {
                        response =
                            Some(expand_template(&rule.response, &question, &observation, &[]));
                        break;
                    }
                }
                MatchKind::Regex => {
                    let re = Regex::new(&rule.pattern).map_err(|e| {
                        Error::Config(format!(
                            "invalid regex pattern '{}' in script for '{}': {e}",
                            rule.pattern, model.id
                        ))
                    })?;
                    if let Some(caps) = re.captures(target) {
                        let groups: Vec<String> = (1..caps.len())
                            .map(|i| caps.get(i).map(|m| m.as_str().to_string()).unwrap_or_default())
                            .collect();
                        response = Some(expand_template(
                            &rule.response,
                            &question,
                            &observation,
                            &groups,
                        ));
                        break;
                    }
                }
            }
        }
    }

    let text = apply_stop_sequences(
        &response.unwrap_or_else(|| SCRIPTED_FALLBACK.to_string()),
        &params.stop_sequences,
    );
    let usage = super::Usage::new(estimate_tokens(&prompt), estimate_tokens(&text));
    Ok(Completion {
        text,
        usage,
        model_id: model.id.clone(),
    })
}
