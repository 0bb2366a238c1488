//! `bench run`.

use std::path::PathBuf;

use clap::Subcommand;

use llmlab_core::bench::{render_report, run_suite, ReportFormat, Suite};
use llmlab_core::Error;

use crate::{Context, EXIT_OK};

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Run a suite against one or more configured models
    Run {
        /// Suite file (JSON)
        suite: PathBuf,
        /// Comma-separated model ids from the configuration
        #[arg(long, required = true, value_delimiter = ',')]
        models: Vec<String>,
        /// Also write the JSON report to this path
        #[arg(long)]
        out: Option<PathBuf>,
        /// Zero the latency fields (for byte-exact report comparisons)
        #[arg(long)]
        mask_latency: bool,
    },
}

pub fn run(context: &Context, command: BenchCommand) -> Result<i32, Error> {
    match command {
        BenchCommand::Run {
            suite,
            models,
            out,
            mask_latency,
        } => {
            let suite = Suite::load(&suite)?;
            let config = context.load_config()?;
            let specs: Vec<_> = models
                .iter()
                .map(|id| context.find_model(&config, id))
                .collect::<Result<_, _>>()?;

            let mut report = run_suite(&suite, &specs, &config.defaults)?;
            if mask_latency {
                report = report.with_masked_latency();
            }

            let stdout_format = if context.json {
                ReportFormat::Json
            } else {
                ReportFormat::Text
            };
            let rendered = render_report(&report, stdout_format)?;
            print!("{}", String::from_utf8_lossy(&rendered));

            if let Some(path) = out {
                let bytes = render_report(&report, ReportFormat::Json)?;
                std::fs::write(&path, bytes).map_err(|e| Error::Io {
                    path: path.clone(),
                    source: e,
                })?;
            }
            // a completed run always exits 0: the pass rate is data
            Ok(EXIT_OK)
        }
    }
}
