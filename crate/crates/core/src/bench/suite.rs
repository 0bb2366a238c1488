//! Suite files and the multi-model suite runner.

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{validate_output, BenchReport, BenchRow, TaskCase};
use crate::model::{build_prompt, complete, cost_of, Cost, GenerationParams, ModelSpec, Usage};
use crate::{Error, Result};

/// A named list of cases, loadable from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Suite {
    pub id: String,
    pub cases: Vec<TaskCase>,
}

impl Suite {
    pub fn new(id: impl Into<String>, cases: Vec<TaskCase>) -> Result<Self> {
        let suite = Suite {
            id: id.into(),
            cases,
        };
        suite.validate()?;
        Ok(suite)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let suite: Suite = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        suite.validate()?;
        Ok(suite)
    }

    /// Case ids must be unique and every case well-formed; validators are
    /// compiled here so bad regexes fail at load, not mid-run.
    pub fn validate(&self) -> Result<()> {
        if self.cases.is_empty() {
            return Err(Error::Validation(format!("suite '{}' has no cases", self.id)));
        }
        let mut seen = std::collections::BTreeSet::new();
        for case in &self.cases {
            case.validate()?;
            if !seen.insert(case.id.as_str()) {
                return Err(Error::Validation(format!(
                    "duplicate case id '{}' in suite '{}'",
                    case.id, self.id
                )));
            }
        }
        Ok(())
    }
}

/// Sends every case to every model and assembles the report: rows sorted by
/// (model id, case id), one aggregate per model. Backend failures are
/// recorded as failing rows, not propagated.
pub fn run_suite(
    suite: &Suite,
    models: &[ModelSpec],
    params: &GenerationParams,
) -> Result<BenchReport> {
    if models.is_empty() {
        return Err(Error::Validation("run_suite requires at least one model".into()));
    }
    suite.validate()?;

    let mut rows = Vec::with_capacity(models.len() * suite.cases.len());
    for model in models {
        for case in &suite.cases {
            let started = Instant::now();
            let row = match build_prompt(&case.prompt)
                .and_then(|messages| complete(model, &messages, params))
            {
                Ok(completion) => {
                    let outcome = validate_output(&case.validator, &completion.text, case);
                    BenchRow {
                        model_id: model.id.clone(),
                        case_id: case.id.clone(),
                        pass: outcome.pass,
                        detail: outcome.detail,
                        usage: completion.usage,
                        cost: cost_of(&completion.usage, model),
                        latency_ms: started.elapsed().as_millis() as u64,
                    }
                }
                Err(e) => BenchRow {
                    model_id: model.id.clone(),
                    case_id: case.id.clone(),
                    pass: false,
                    detail: format!("backend error: {e}"),
                    usage: Usage::default(),
                    cost: Cost::zero(),
                    latency_ms: started.elapsed().as_millis() as u64,
                },
            };
            rows.push(row);
        }
    }
    Ok(BenchReport::assemble(suite.id.clone(), rows))
}
