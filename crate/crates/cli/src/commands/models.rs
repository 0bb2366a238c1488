//! `models list` and `models lab`.

use std::path::PathBuf;

use clap::Subcommand;

use llmlab_core::model::{prompt_lab, Backend, PromptSpec};
use llmlab_core::Error;

use crate::output::print_json;
use crate::{Context, EXIT_OK};

#[derive(Debug, Subcommand)]
pub enum ModelsCommand {
    /// List configured models
    List,
    /// Send one prompt to several models and compare
    Lab {
        /// PromptSpec JSON file
        #[arg(long)]
        prompt_file: PathBuf,
        /// Comma-separated model ids
        #[arg(long, required = true, value_delimiter = ',')]
        models: Vec<String>,
    },
}

pub fn run(context: &Context, command: ModelsCommand) -> Result<i32, Error> {
    let config = context.load_config()?;
    match command {
        ModelsCommand::List => {
            let mut models = config.models.clone();
            models.sort_by(|a, b| a.id.cmp(&b.id));
            if context.json {
                print_json(&models)?;
            } else {
                for model in &models {
                    let backend = match model.backend {
                        Backend::Scripted => "scripted",
                        Backend::HttpChat => "http_chat",
                    };
                    println!(
                        "{}  {}  in={:.6}/1k out={:.6}/1k",
                        model.id,
                        backend,
                        model.price_in_per_1k.as_currency(),
                        model.price_out_per_1k.as_currency(),
                    );
                }
            }
            Ok(EXIT_OK)
        }
        ModelsCommand::Lab {
            prompt_file,
            models,
        } => {
            let text = std::fs::read_to_string(&prompt_file).map_err(|e| Error::Io {
                path: prompt_file.clone(),
                source: e,
            })?;
            let spec: PromptSpec = serde_json::from_str(&text).map_err(|e| Error::Parse {
                line: e.line(),
                message: e.to_string(),
            })?;
            spec.validate()?;

            let specs: Vec<_> = models
                .iter()
                .map(|id| context.find_model(&config, id))
                .collect::<Result<_, _>>()?;
            let report = prompt_lab(&spec, &specs, &config.defaults)?;

            if context.json {
                print_json(&report)?;
            } else {
                for row in &report.rows {
                    match &row.error {
                        Some(error) => println!("{}: ERROR {error}", row.model_id),
                        None => println!(
                            "{}: {} (tokens {}+{}, cost {}, estimated)",
                            row.model_id,
                            row.text.replace('\n', " / "),
                            row.usage.prompt_tokens,
                            row.usage.completion_tokens,
                            row.cost.to_decimal_string(),
                        ),
                    }
                }
            }
            Ok(EXIT_OK)
        }
    }
}
