//! Model-output parsing and observation sanitization.

use serde::{Deserialize, Serialize};

/// Lines beginning with any of these keywords are treated as ReAct
/// template control lines.
pub const REACT_KEYWORDS: [&str; 6] = [
    "Thought:",
    "Action:",
    "Action Input:",
    "Final Answer:",
    "Observation:",
    "Question:",
];

/// What the model's output meant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParsedOutput {
    /// An `Action:` line, with the input from the following
    /// `Action Input:` line (empty when absent).
    Action { tool: String, input: String },
    /// A `Final Answer:` line; carries the remainder of that line plus all
    /// following lines, trimmed.
    FinalAnswer(String),
    /// Neither marker was present; carries the unparsed text.
    ParseError(String),
}

/// Scans lines in order; whichever marker (`Action:` or `Final Answer:`)
/// appears first wins.
pub fn parse_model_output(text: &str) -> ParsedOutput {
    let lines: Vec<&str> = text.split('\n').collect();
    for (i, line) in lines.iter().enumerate() {
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix("Final Answer:") {
            let mut answer = rest.to_string();
            for following in &lines[i + 1..] {
                answer.push('\n');
                answer.push_str(following);
            }
            return ParsedOutput::FinalAnswer(answer.trim().to_string());
        }
        if trimmed.starts_with("Action Input:") {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("Action:") {
            let input = lines[i + 1..]
                .iter()
                .find_map(|l| l.trim_start().strip_prefix("Action Input:"))
                .map(|s| s.trim().to_string())
                .unwrap_or_default();
            return ParsedOutput::Action {
                tool: rest.trim().to_string(),
                input,
            };
        }
    }
    ParsedOutput::ParseError(text.to_string())
}

/// Neutralizes template-keyword lines in untrusted tool output by
/// prefixing them with `"> "`. Idempotent: a prefixed line no longer
/// starts with a keyword, so sanitizing twice changes nothing, and no line
/// of the result begins with a ReAct keyword.
pub fn sanitize_observation(text: &str) -> String {
    text.split('\n')
        .map(|line| {
            let trimmed = line.trim_start();
            if REACT_KEYWORDS.iter().any(|k| trimmed.starts_with(k)) {
                format!("> {line}")
            } else {
                line.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}
