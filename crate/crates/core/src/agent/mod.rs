//! ReAct agent: template, parser, tool registry, validation, sanitization,
//! and the bounded execution loop.
//!
//! The agent is the security lab's main subject. Its prompt template is
//! rendered bit-exact by one function so injection-surface reasoning stays
//! in one place, tool input validation is fail-closed (a handler never sees
//! input that fails its constraints), and tool observations optionally pass
//! through a sanitizer that neutralizes template-keyword lines.

mod constraints;
mod parser;
mod runner;
mod template;

pub use constraints::{validate_input, ConstraintKind, FieldConstraint, ValidationError};
pub use parser::{parse_model_output, sanitize_observation, ParsedOutput, REACT_KEYWORDS};
pub use runner::{run_agent, trace_summary, TraceSummary};
pub use template::render_react_prompt;

use serde::{Deserialize, Serialize};

use crate::model::{Cost, GenerationParams, ModelSpec, Usage};
use crate::{Error, Result};

/// Handler running a tool: validated input text in, observation text out.
/// An `Err` becomes an `Error: …` observation and the agent loop continues.
pub type ToolHandler = Box<dyn Fn(&str) -> std::result::Result<String, String> + Send + Sync>;

/// A registered tool: name, one-line description (injected into the
/// prompt), input constraints, and the handler.
pub struct ToolSpec {
    pub name: String,
    pub description: String,
    pub constraints: Vec<FieldConstraint>,
    pub handler: ToolHandler,
}

impl ToolSpec {
    pub fn new(
        name: impl Into<String>,
        description: impl Into<String>,
        constraints: Vec<FieldConstraint>,
        handler: ToolHandler,
    ) -> Result<Self> {
        let name = name.into();
        let description = description.into();
        if name.is_empty()
            || name.chars().any(|c| c.is_whitespace())
            || name.chars().any(|c| c.is_uppercase())
        {
            return Err(Error::Validation(format!(
                "tool name must be lowercase without whitespace: '{name}'"
            )));
        }
        if description.is_empty() || description.contains('\n') {
            return Err(Error::Validation(format!(
                "tool '{name}' needs a non-empty one-line description"
            )));
        }
        Ok(ToolSpec {
            name,
            description,
            constraints,
            handler,
        })
    }
}

impl std::fmt::Debug for ToolSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ToolSpec")
            .field("name", &self.name)
            .field("description", &self.description)
            .field("constraints", &self.constraints)
            .finish_non_exhaustive()
    }
}

/// Ordered set of tools with unique names.
#[derive(Debug, Default)]
pub struct ToolRegistry {
    tools: Vec<ToolSpec>,
}

impl ToolRegistry {
    pub fn new() -> Self {
        ToolRegistry::default()
    }

    pub fn with(mut self, tool: ToolSpec) -> Result<Self> {
        self.add(tool)?;
        Ok(self)
    }

    pub fn add(&mut self, tool: ToolSpec) -> Result<()> {
        if self.get(&tool.name).is_some() {
            return Err(Error::Validation(format!(
                "duplicate tool name '{}'",
                tool.name
            )));
        }
        self.tools.push(tool);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&ToolSpec> {
        self.tools.iter().find(|t| t.name == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ToolSpec> {
        self.tools.iter()
    }

    pub fn names(&self) -> Vec<&str> {
        self.tools.iter().map(|t| t.name.as_str()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.tools.is_empty()
    }
}

/// A tool invocation parsed from model output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolCall {
    pub tool: String,
    pub input: String,
}

/// One loop iteration. Action steps carry both `action` and `observation`;
/// the final answer step carries neither.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentStep {
    pub thought: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ToolCall>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observation: Option<String>,
}

/// How a run ended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentOutcome {
    FinalAnswer(String),
    MaxIterationsExceeded,
    Aborted(String),
}

impl AgentOutcome {
    pub fn final_answer(&self) -> Option<&str> {
        match self {
            AgentOutcome::FinalAnswer(text) => Some(text),
            _ => None,
        }
    }
}

/// Full record of one agent run, with exact summed accounting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentTrace {
    pub question: String,
    pub steps: Vec<AgentStep>,
    pub outcome: AgentOutcome,
    pub usage: Usage,
    pub cost: Cost,
}

/// Default iteration budget.
pub const DEFAULT_MAX_ITERATIONS: u32 = 8;

/// An agent wiring: tools, model, loop bounds, and the sanitization switch.
pub struct AgentConfig {
    pub tools: ToolRegistry,
    pub model: ModelSpec,
    pub max_iterations: u32,
    pub sanitize_observations: bool,
    pub params: GenerationParams,
}

impl AgentConfig {
    pub fn new(tools: ToolRegistry, model: ModelSpec) -> Result<Self> {
        if tools.is_empty() {
            return Err(Error::Validation("agent needs at least one tool".into()));
        }
        Ok(AgentConfig {
            tools,
            model,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            sanitize_observations: false,
            params: GenerationParams::default(),
        })
    }

    pub fn with_max_iterations(mut self, max_iterations: u32) -> Result<Self> {
        if max_iterations == 0 {
            return Err(Error::Validation("max_iterations must be positive".into()));
        }
        self.max_iterations = max_iterations;
        Ok(self)
    }

    pub fn with_sanitization(mut self, sanitize: bool) -> Self {
        self.sanitize_observations = sanitize;
        self
    }
}
