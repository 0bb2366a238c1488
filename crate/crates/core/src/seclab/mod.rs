//! The security laboratory: attack/defense exercises with machine-checked
//! outcomes.
//!
//! Every exercise pairs a vulnerable build with a hardened build, runs both
//! against the identical attack input and scripted model, and applies a
//! pure compromise detector to the run artifacts. The lab's core contract
//! is asymmetry: the vulnerable variant compromised with evidence, the
//! hardened variant clean.
//!
//! Exercises are hermetic: scripted models, fake terminals, in-memory
//! tables and stores. No exercise touches the network or the host shell.

mod exercises;

pub use exercises::{builtin_exercises, LEAK_SECRET};

use serde::{Deserialize, Serialize};

use crate::agent::{AgentOutcome, AgentTrace};
use crate::model::{ModelSpec, Usage};
use crate::tools::TableStore;
use crate::Result;

/// Which build of an exercise to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Vulnerable,
    Hardened,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Vulnerable => "vulnerable",
            Variant::Hardened => "hardened",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vulnerable" => Ok(Variant::Vulnerable),
            "hardened" => Ok(Variant::Hardened),
            other => Err(crate::Error::Validation(format!(
                "unknown variant '{other}' (expected vulnerable or hardened)"
            ))),
        }
    }
}

/// Everything a detector may inspect after a run. Detectors are pure
/// functions over this snapshot.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub trace: AgentTrace,
    /// The outgoing answer as the application would deliver it (post
    /// mitigation, where one applies).
    pub final_answer: String,
    /// Snapshot of the fake terminal's invocation log.
    pub terminal_log: Vec<String>,
    /// Snapshot of the table store after the run, for database exercises.
    pub table_store: Option<TableStore>,
    /// The rendered HTML report, for output-sanitization exercises.
    pub report_html: Option<String>,
}

impl RunArtifacts {
    /// Artifacts for a plain render pipeline (no agent loop): a synthetic
    /// zero-step trace carries the question, answer, and accounting.
    pub fn for_pipeline(question: &str, answer: String, usage: Usage) -> Self {
        RunArtifacts {
            trace: AgentTrace {
                question: question.to_string(),
                steps: Vec::new(),
                outcome: AgentOutcome::FinalAnswer(answer.clone()),
                usage,
                cost: crate::model::Cost::zero(),
            },
            final_answer: answer,
            terminal_log: Vec::new(),
            table_store: None,
            report_html: None,
        }
    }
}

/// A pure predicate over run artifacts; yields evidence when compromised.
pub struct CompromiseDetector {
    predicate: Box<dyn Fn(&RunArtifacts) -> Option<String> + Send + Sync>,
}

impl CompromiseDetector {
    pub fn new(
        predicate: impl Fn(&RunArtifacts) -> Option<String> + Send + Sync + 'static,
    ) -> Self {
        CompromiseDetector {
            predicate: Box::new(predicate),
        }
    }

    pub fn evaluate(&self, artifacts: &RunArtifacts) -> Option<String> {
        (self.predicate)(artifacts)
    }
}

/// Runs one prepared environment against the attack input.
pub type LabRunner = Box<dyn FnOnce(&str) -> Result<RunArtifacts> + Send>;

/// Builds a fresh environment; the optional model replaces the exercise's
/// scripted one for live demonstrations.
pub type LabBuilder = Box<dyn Fn(Option<&ModelSpec>) -> Result<LabRunner> + Send + Sync>;

/// One attack/defense scenario.
pub struct Exercise {
    pub id: String,
    pub description: String,
    pub attack_input: String,
    build_vulnerable: LabBuilder,
    build_hardened: LabBuilder,
    detector: CompromiseDetector,
}

impl Exercise {
    pub fn new(
        id: impl Into<String>,
        description: impl Into<String>,
        attack_input: impl Into<String>,
        build_vulnerable: LabBuilder,
        build_hardened: LabBuilder,
        detector: CompromiseDetector,
    ) -> Self {
        Exercise {
            id: id.into(),
            description: description.into(),
            attack_input: attack_input.into(),
            build_vulnerable,
            build_hardened,
            detector,
        }
    }

    pub fn builder(&self, variant: Variant) -> &LabBuilder {
        match variant {
            Variant::Vulnerable => &self.build_vulnerable,
            Variant::Hardened => &self.build_hardened,
        }
    }
}

impl std::fmt::Debug for Exercise {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Exercise")
            .field("id", &self.id)
            .field("attack_input", &self.attack_input)
            .finish_non_exhaustive()
    }
}

/// Machine-checked outcome of one exercise run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabReport {
    pub exercise_id: String,
    pub variant: Variant,
    pub compromised: bool,
    pub evidence: String,
    pub trace: AgentTrace,
}

/// Pure evaluation of the exercise's detector against run artifacts.
pub fn detect_compromise(ex: &Exercise, artifacts: &RunArtifacts) -> (bool, String) {
    match ex.detector.evaluate(artifacts) {
        Some(evidence) => (true, evidence),
        None => (false, String::new()),
    }
}

/// Builds the environment, runs the attack input through it, and applies
/// the detector. Build or run failures come back as an aborted report
/// rather than an error.
pub fn run_exercise(
    ex: &Exercise,
    variant: Variant,
    model_override: Option<&ModelSpec>,
) -> LabReport {
    let aborted = |message: String| LabReport {
        exercise_id: ex.id.clone(),
        variant,
        compromised: false,
        evidence: String::new(),
        trace: AgentTrace {
            question: ex.attack_input.clone(),
            steps: Vec::new(),
            outcome: AgentOutcome::Aborted(message),
            usage: Usage::default(),
            cost: crate::model::Cost::zero(),
        },
    };

    let runner = match (ex.builder(variant))(model_override) {
        Ok(runner) => runner,
        Err(e) => return aborted(format!("environment build failed: {e}")),
    };
    let artifacts = match runner(&ex.attack_input) {
        Ok(artifacts) => artifacts,
        Err(e) => return aborted(format!("run failed: {e}")),
    };
    let (compromised, evidence) = detect_compromise(ex, &artifacts);
    LabReport {
        exercise_id: ex.id.clone(),
        variant,
        compromised,
        evidence,
        trace: artifacts.trace,
    }
}

/// Result of the lab's core contract check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AsymmetryOutcome {
    Pass,
    Fail(String),
}

impl AsymmetryOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, AsymmetryOutcome::Pass)
    }
}

/// Runs both variants and checks the contract: vulnerable compromised
/// (with non-empty evidence), hardened clean.
pub fn assert_asymmetry(ex: &Exercise) -> AsymmetryOutcome {
    let vulnerable = run_exercise(ex, Variant::Vulnerable, None);
    let hardened = run_exercise(ex, Variant::Hardened, None);
    match (vulnerable.compromised, hardened.compromised) {
        (true, false) => {
            if vulnerable.evidence.is_empty() {
                AsymmetryOutcome::Fail(format!(
                    "{}: vulnerable variant compromised but evidence is empty",
                    ex.id
                ))
            } else {
                AsymmetryOutcome::Pass
            }
        }
        (true, true) => AsymmetryOutcome::Fail(format!(
            "{}: both variants compromised (hardened evidence: {})",
            ex.id, hardened.evidence
        )),
        (false, false) => AsymmetryOutcome::Fail(format!(
            "{}: neither variant compromised (vulnerable outcome: {:?})",
            ex.id, vulnerable.trace.outcome
        )),
        (false, true) => AsymmetryOutcome::Fail(format!(
            "{}: inverted result: hardened compromised, vulnerable clean",
            ex.id
        )),
    }
}

/// Minimal HTML escaping for report rendering.
pub fn escape_html(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
        .replace('\'', "&#39;")
}
