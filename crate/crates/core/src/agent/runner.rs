//! The bounded ReAct execution loop.

use serde::{Deserialize, Serialize};

use super::{
    parse_model_output, render_react_prompt, sanitize_observation, validate_input, AgentConfig,
    AgentOutcome, AgentStep, AgentTrace, ParsedOutput, ToolCall,
};
use crate::model::{complete, cost_of, Cost, Message, Usage};

/// Instruction appended to the prompt for the single parse-failure retry.
const RETRY_INSTRUCTION: &str = "Respond in the required format.";

fn extract_thought(text: &str) -> String {
    text.split('\n')
        .find_map(|line| line.trim_start().strip_prefix("Thought:"))
        .map(|s| s.trim().to_string())
        .unwrap_or_default()
}

/// Runs the loop: render prompt → complete → parse → act, until a final
/// answer, the iteration budget, or an abort.
///
/// Unknown tools and constraint rejections become `Error: …` observations
/// and the loop continues; a handler is never invoked with input that
/// failed validation. A parse failure is retried once for the whole run
/// with [`RETRY_INSTRUCTION`] appended; a second failure aborts. Backend
/// errors abort with the error text.
pub fn run_agent(config: &AgentConfig, question: &str) -> crate::Result<AgentTrace> {
    if question.is_empty() {
        return Err(crate::Error::Validation(
            "question must be non-empty".into(),
        ));
    }

    let mut steps: Vec<AgentStep> = Vec::new();
    let mut usage = Usage::default();
    let mut cost = Cost::zero();
    let mut retried = false;

    let finish = |steps: Vec<AgentStep>, outcome: AgentOutcome, usage: Usage, cost: Cost| {
        Ok(AgentTrace {
            question: question.to_string(),
            steps,
            outcome,
            usage,
            cost,
        })
    };

    for _ in 0..config.max_iterations {
        let mut prompt = render_react_prompt(config, question, &steps);

        // One completion, with a single whole-run retry on unparsable output.
        let (text, parsed) = loop {
            let completion = match complete(
                &config.model,
                &[Message::user(prompt.clone())],
                &config.params,
            ) {
                Ok(c) => c,
                Err(e) => return finish(steps, AgentOutcome::Aborted(e.to_string()), usage, cost),
            };
            usage += completion.usage;
            cost += cost_of(&completion.usage, &config.model);

            match parse_model_output(&completion.text) {
                ParsedOutput::ParseError(raw) => {
                    if retried {
                        return finish(
                            steps,
                            AgentOutcome::Aborted(format!(
                                "model output did not match the required format: {raw}"
                            )),
                            usage,
                            cost,
                        );
                    }
                    retried = true;
                    prompt.push_str(RETRY_INSTRUCTION);
                    prompt.push('\n');
                }
                parsed => break (completion.text, parsed),
            }
        };

        match parsed {
            ParsedOutput::FinalAnswer(answer) => {
                steps.push(AgentStep {
                    thought: extract_thought(&text),
                    action: None,
                    observation: None,
                });
                return finish(steps, AgentOutcome::FinalAnswer(answer), usage, cost);
            }
            ParsedOutput::Action { tool, input } => {
                let observation = match config.tools.get(&tool) {
                    None => format!(
                        "Error: unknown tool '{}'. Available tools: [{}]",
                        tool,
                        config.tools.names().join(", ")
                    ),
                    Some(spec) => match validate_input(spec, &input) {
                        Err(rejection) => format!("Error: {rejection}"),
                        Ok(valid) => match (spec.handler)(valid) {
                            Ok(output) => output,
                            Err(message) => format!("Error: {message}"),
                        },
                    },
                };
                let observation = if config.sanitize_observations {
                    sanitize_observation(&observation)
                } else {
                    observation
                };
                steps.push(AgentStep {
                    thought: extract_thought(&text),
                    action: Some(ToolCall { tool, input }),
                    observation: Some(observation),
                });
            }
            ParsedOutput::ParseError(_) => unreachable!("handled in the retry loop"),
        }
    }

    finish(steps, AgentOutcome::MaxIterationsExceeded, usage, cost)
}

/// Roll-up of a trace: counts, exact accounting, and the ordered distinct
/// list of invoked tools.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub steps: usize,
    pub usage: Usage,
    pub cost: Cost,
    pub tools_used: Vec<String>,
}

pub fn trace_summary(trace: &AgentTrace) -> TraceSummary {
    let mut tools_used: Vec<String> = Vec::new();
    for step in &trace.steps {
        if let Some(action) = &step.action {
            if !tools_used.contains(&action.tool) {
                tools_used.push(action.tool.clone());
            }
        }
    }
    TraceSummary {
        steps: trace.steps.len(),
        usage: trace.usage,
        cost: trace.cost,
        tools_used,
    }
}
