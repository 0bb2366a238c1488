//! `lab list` and `lab run`.

use clap::Subcommand;

use llmlab_core::seclab::{assert_asymmetry, builtin_exercises, run_exercise, LabReport, Variant};
use llmlab_core::Error;

use crate::output::print_json;
use crate::{Context, EXIT_ASSERTION, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Subcommand)]
pub enum LabCommand {
    /// List the built-in exercises
    List,
    /// Run one exercise
    Run {
        /// Exercise id (see `lab list`)
        exercise_id: String,
        /// Which build to run
        #[arg(long, default_value = "both", value_parser = ["vulnerable", "hardened", "both"])]
        variant: String,
    },
}

fn print_report(context: &Context, report: &LabReport) -> Result<(), Error> {
    if context.json {
        print_json(report)?;
        return Ok(());
    }
    println!(
        "[{}] {} variant: {}",
        report.exercise_id,
        report.variant.as_str(),
        if report.compromised {
            "COMPROMISED"
        } else {
            "clean"
        }
    );
    if !report.evidence.is_empty() {
        println!("  evidence: {}", report.evidence);
    }
    if context.verbose > 0 {
        for (i, step) in report.trace.steps.iter().enumerate() {
            match (&step.action, &step.observation) {
                (Some(action), Some(observation)) => {
                    println!("  step {i}: {} <- {:?}", action.tool, action.input);
                    for line in observation.lines() {
                        println!("    | {line}");
                    }
                }
                _ => println!("  step {i}: (final)"),
            }
        }
        println!("  outcome: {:?}", report.trace.outcome);
    }
    Ok(())
}

pub fn run(context: &Context, command: LabCommand) -> Result<i32, Error> {
    match command {
        LabCommand::List => {
            let exercises = builtin_exercises();
            if context.json {
                let listing: Vec<serde_json::Value> = exercises
                    .iter()
                    .map(|e| {
                        serde_json::json!({
                            "id": e.id,
                            "description": e.description,
                            "attack_input": e.attack_input,
                        })
                    })
                    .collect();
                print_json(&listing)?;
            } else {
                for ex in &exercises {
                    println!("{}", ex.id);
                }
            }
            Ok(EXIT_OK)
        }
        LabCommand::Run {
            exercise_id,
            variant,
        } => {
            let exercises = builtin_exercises();
            let Some(exercise) = exercises.iter().find(|e| e.id == exercise_id) else {
                let known: Vec<&str> = exercises.iter().map(|e| e.id.as_str()).collect();
                eprintln!(
                    "error: unknown exercise '{exercise_id}'; known ids: {}",
                    known.join(", ")
                );
                return Ok(EXIT_USAGE);
            };

            let config = context.load_config()?;
            let model_override = match &context.model_override {
                Some(id) => Some(context.find_model(&config, id)?),
                None => None,
            };

            match variant.as_str() {
                "both" => {
                    let vulnerable =
                        run_exercise(exercise, Variant::Vulnerable, model_override.as_ref());
                    let hardened =
                        run_exercise(exercise, Variant::Hardened, model_override.as_ref());
                    print_report(context, &vulnerable)?;
                    print_report(context, &hardened)?;
                    let outcome = assert_asymmetry(exercise);
                    match outcome {
                        llmlab_core::seclab::AsymmetryOutcome::Pass => {
                            if !context.json {
                                println!("asymmetry: PASS");
                            }
                            Ok(EXIT_OK)
                        }
                        llmlab_core::seclab::AsymmetryOutcome::Fail(details) => {
                            eprintln!("asymmetry: FAIL ({details})");
                            Ok(EXIT_ASSERTION)
                        }
                    }
                }
                single => {
                    let variant: Variant = single.parse()?;
                    let report = run_exercise(exercise, variant, model_override.as_ref());
                    print_report(context, &report)?;
                    let expected = match variant {
                        Variant::Vulnerable => report.compromised,
                        Variant::Hardened => !report.compromised,
                    };
                    Ok(if expected { EXIT_OK } else { EXIT_ASSERTION })
                }
            }
        }
    }
}
