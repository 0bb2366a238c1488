//! Prompt laboratory: one prompt, many models, side-by-side results.

use serde::{Deserialize, Serialize};

use super::{build_prompt, complete, cost_of, Cost, GenerationParams, ModelSpec, PromptSpec, Usage};
use crate::{Error, Result};

/// Result of sending one prompt to one model. A backend failure is captured
/// in `error` rather than propagated, so one broken model cannot poison the
/// comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub model_id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub usage: Usage,
    pub cost: Cost,
}

/// Per-model rows, sorted by model id.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
}

/// Sends the identical prompt to every model and collects one row per
/// model, ordered by model id.
pub fn prompt_lab(
    spec: &PromptSpec,
    models: &[ModelSpec],
    params: &GenerationParams,
) -> Result<ComparisonReport> {
    if models.is_empty() {
        return Err(Error::Validation(
            "prompt_lab requires at least one model".into(),
        ));
    }
    let messages = build_prompt(spec)?;

    let mut rows: Vec<ComparisonRow> = models
        .iter()
        .map(|model| match complete(model, &messages, params) {
            Ok(completion) => ComparisonRow {
                model_id: model.id.clone(),
                text: completion.text,
                error: None,
                cost: cost_of(&completion.usage, model),
                usage: completion.usage,
            },
            Err(e) => ComparisonRow {
                model_id: model.id.clone(),
                text: String::new(),
                error: Some(e.to_string()),
                usage: Usage::default(),
                cost: Cost::zero(),
            },
        })
        .collect();
    rows.sort_by(|a, b| a.model_id.cmp(&b.model_id));
    Ok(ComparisonReport { rows })
}
