//! `chat`: a line-oriented REPL, plain or agent mode.

use std::io::BufRead;
use std::sync::Arc;

use clap::Args;

use llmlab_core::agent::{run_agent, AgentConfig, AgentTrace, ToolRegistry};
use llmlab_core::model::{complete, Message};
use llmlab_core::rag::VectorStore;
use llmlab_core::tools::{
    make_calculator_tool, make_terminal_tool, make_vector_query_tool, CommandPolicy, FakeTerminal,
};
use llmlab_core::Error;

use crate::output::{print_json, to_canonical_json};
use crate::{Context, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Args)]
pub struct ChatArgs {
    /// Model id (falls back to the global --model)
    #[arg(long)]
    model: Option<String>,
    /// Run each line through the ReAct agent instead of a plain completion
    #[arg(long)]
    agent: bool,
    /// Comma-separated tools for agent mode: calculator, terminal,
    /// vector_db_query
    #[arg(long, value_delimiter = ',', default_value = "calculator")]
    tools: Vec<String>,
    /// Write the last agent trace to this file as JSON
    #[arg(long)]
    trace: Option<std::path::PathBuf>,
    /// Store file backing the vector_db_query tool
    #[arg(long)]
    store: Option<std::path::PathBuf>,
}

fn build_registry(args: &ChatArgs) -> Result<ToolRegistry, Error> {
    let mut registry = ToolRegistry::new();
    for tool in &args.tools {
        match tool.as_str() {
            "calculator" => registry.add(make_calculator_tool())?,
            "terminal" => registry.add(make_terminal_tool(
                CommandPolicy::Fake(FakeTerminal::new(Default::default())),
                vec![],
            ))?,
            "vector_db_query" => {
                let path = args.store.as_ref().ok_or_else(|| {
                    Error::Config("vector_db_query requires --store".into())
                })?;
                let store = Arc::new(VectorStore::load(path)?);
                registry.add(make_vector_query_tool(store)?)?;
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown tool '{other}' (available: calculator, terminal, vector_db_query)"
                )))
            }
        }
    }
    Ok(registry)
}

pub fn run(context: &Context, args: ChatArgs) -> Result<i32, Error> {
    let config = context.load_config()?;
    let model_id = args
        .model
        .clone()
        .or_else(|| context.model_override.clone())
        .ok_or_else(|| Error::Config("no model selected (use --model)".into()))?;
    let model = match context.find_model(&config, &model_id) {
        Ok(model) => model,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(EXIT_USAGE);
        }
    };

    let agent_config = if args.agent {
        let registry = match build_registry(&args) {
            Ok(registry) => registry,
            Err(e) => {
                eprintln!("error: {e}");
                return Ok(EXIT_USAGE);
            }
        };
        let mut agent_config = AgentConfig::new(registry, model.clone())?;
        agent_config.params = config.defaults.clone();
        Some(agent_config)
    } else {
        None
    };

    let stdin = std::io::stdin();
    let mut last_trace: Option<AgentTrace> = None;
    for line in stdin.lock().lines() {
        let line = line.map_err(|e| Error::Io {
            path: "<stdin>".into(),
            source: e,
        })?;
        if line.trim().is_empty() {
            continue;
        }

        let answer = match &agent_config {
            Some(agent_config) => {
                let trace = run_agent(agent_config, &line)?;
                let answer = match &trace.outcome {
                    llmlab_core::agent::AgentOutcome::FinalAnswer(text) => text.clone(),
                    other => format!("(no final answer: {other:?})"),
                };
                last_trace = Some(trace);
                answer
            }
            None => {
                complete(&model, &[Message::user(line.clone())], &config.defaults)?.text
            }
        };

        if context.json {
            print_json(&serde_json::json!({ "answer": answer }))?;
        } else {
            println!("{answer}");
        }
    }

    if let Some(path) = &args.trace {
        if let Some(trace) = &last_trace {
            let json = to_canonical_json(trace)?;
            std::fs::write(path, format!("{json}\n")).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
        }
    }
    Ok(EXIT_OK)
}
