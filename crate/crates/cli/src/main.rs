//! Operator front end: security lab, benchmarks, RAG stores, model
//! laboratory, and an interactive chat/agent REPL.
//!
//! Exit codes are CI-friendly: 0 for success or the expected outcome, 1
//! when a lab assertion fails (a vulnerable build that resists or a
//! hardened build that falls), 2 for usage and configuration problems.
//! The default configuration touches neither the network nor the host
//! shell: scripted models, fake terminal, fixture-backed adapters.

mod commands;
mod output;

use clap::{Parser, Subcommand};

use llmlab_core::model::ModelConfig;

pub(crate) const EXIT_OK: i32 = 0;
pub(crate) const EXIT_ASSERTION: i32 = 1;
pub(crate) const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "llmlab",
    about = "LLM application framework and security laboratory",
    version
)]
struct Cli {
    /// Configuration file (defaults to ./config.json, then
    /// ~/.config/llmlab/config.json)
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,

    /// Output format
    #[arg(long, global = true, default_value = "text", value_parser = ["text", "json"])]
    format: String,

    /// Model id override (replaces an exercise's scripted model, or selects
    /// the model for chat / rag answer)
    #[arg(long, global = true)]
    model: Option<String>,

    /// Increase logging verbosity (repeatable)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Security lab exercises
    Lab {
        #[command(subcommand)]
        command: commands::lab::LabCommand,
    },
    /// Known-answer benchmarks
    Bench {
        #[command(subcommand)]
        command: commands::bench::BenchCommand,
    },
    /// RAG store operations
    Rag {
        #[command(subcommand)]
        command: commands::rag::RagCommand,
    },
    /// Interactive chat (plain or agent mode)
    Chat(commands::chat::ChatArgs),
    /// Model catalog and prompt laboratory
    Models {
        #[command(subcommand)]
        command: commands::models::ModelsCommand,
    },
}

/// Global options passed down to subcommands.
pub(crate) struct Context {
    pub config_path: Option<std::path::PathBuf>,
    pub json: bool,
    pub model_override: Option<String>,
    pub verbose: u8,
}

impl Context {
    /// Loads the model configuration using the discovery order: explicit
    /// flag, then ./config.json, then the per-user path. Absence is only an
    /// error when a command actually needs a model.
    pub fn load_config(&self) -> Result<ModelConfig, llmlab_core::Error> {
        if let Some(path) = &self.config_path {
            return ModelConfig::load(path);
        }
        let cwd = std::path::Path::new("config.json");
        if cwd.exists() {
            return ModelConfig::load(cwd);
        }
        if let Some(home) = std::env::var_os("HOME") {
            let user = std::path::Path::new(&home).join(".config/llmlab/config.json");
            if user.exists() {
                return ModelConfig::load(user);
            }
        }
        Ok(ModelConfig::default())
    }

    /// Resolves a model id against the configuration.
    pub fn find_model(
        &self,
        config: &ModelConfig,
        id: &str,
    ) -> Result<llmlab_core::model::ModelSpec, llmlab_core::Error> {
        config.find(id).cloned().ok_or_else(|| {
            let known: Vec<&str> = config.models.iter().map(|m| m.id.as_str()).collect();
            llmlab_core::Error::Config(format!(
                "unknown model '{id}' (configured: [{}])",
                known.join(", ")
            ))
        })
    }
}

fn main() {
    let cli = Cli::parse();
    let context = Context {
        config_path: cli.config,
        json: cli.format == "json",
        model_override: cli.model,
        verbose: cli.verbose,
    };

    let code = match cli.command {
        Command::Lab { command } => commands::lab::run(&context, command),
        Command::Bench { command } => commands::bench::run(&context, command),
        Command::Rag { command } => commands::rag::run(&context, command),
        Command::Chat(args) => commands::chat::run(&context, args),
        Command::Models { command } => commands::models::run(&context, command),
    };
    let code = code.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    });
    std::process::exit(code);
}
