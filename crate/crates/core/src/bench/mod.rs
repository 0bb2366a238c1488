//! Known-answer benchmark harness.
//!
//! Task cases carry machine-checkable validators: exact match, full-match
//! regex, case-insensitive keyword presence (marked as weak validation in
//! reports), and decode oracles that independently decode the case's
//! encoded payload and compare. Deobfuscation cases are generated rather
//! than hand-written, so expected values always come from the encoder.

mod deobf;
mod report;
mod suite;

pub use deobf::{make_deobf_case, oracle_decode, oracle_encode, DeobfScheme};
pub use report::{render_report, BenchReport, BenchRow, ModelAggregate, ReportFormat};
pub use suite::{run_suite, Suite};

use serde::{Deserialize, Serialize};

use crate::model::PromptSpec;
use crate::{Error, Result};

/// How a case's output is judged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Validator {
    /// Trimmed equality against the expected text.
    Exact,
    /// The whole (trimmed) output matches the pattern.
    Regex { pattern: String },
    /// Every term appears, case-insensitively. Weak validation: presence,
    /// not correctness.
    ContainsAll { terms: Vec<String> },
    /// Independently decode the case's payload and compare to the trimmed
    /// output.
    DecodeOracle { scheme: DeobfScheme },
}

impl Validator {
    /// Suite-load-time validation; bad regexes are configuration errors
    /// here, never at run time.
    pub fn validate(&self) -> Result<()> {
        match self {
            Validator::Regex { pattern } => {
                regex::Regex::new(pattern).map_err(|e| {
                    Error::Config(format!("invalid validator regex '{pattern}': {e}"))
                })?;
                Ok(())
            }
            Validator::ContainsAll { terms } if terms.is_empty() => Err(Error::Config(
                "contains_all validator needs at least one term".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// One benchmark case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskCase {
    pub id: String,
    pub prompt: PromptSpec,
    pub expected: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<String>,
    pub validator: Validator,
}

impl TaskCase {
    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::Validation("case id is empty".into()));
        }
        self.prompt.validate()?;
        self.validator.validate()?;
        if let Validator::DecodeOracle { scheme } = &self.validator {
            let payload = self.payload.as_deref().ok_or_else(|| {
                Error::Validation(format!("decode_oracle case '{}' has no payload", self.id))
            })?;
            let decoded = oracle_decode(scheme, payload)?;
            if decoded != self.expected {
                return Err(Error::Validation(format!(
                    "case '{}': expected text does not equal the oracle's decode of its payload",
                    self.id
                )));
            }
        }
        Ok(())
    }
}

/// Verdict for one (model, case) evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationOutcome {
    pub pass: bool,
    pub detail: String,
}

/// Judges a model output against a case's validator.
pub fn validate_output(validator: &Validator, output: &str, case: &TaskCase) -> ValidationOutcome {
    let trimmed = output.trim();
    match validator {
        Validator::Exact => {
            if trimmed == case.expected.trim() {
                ValidationOutcome {
                    pass: true,
                    detail: "exact match".into(),
                }
            } else {
                ValidationOutcome {
                    pass: false,
                    detail: format!("expected '{}', got '{trimmed}'", case.expected.trim()),
                }
            }
        }
        Validator::Regex { pattern } => match regex::Regex::new(&format!("^(?:{pattern})$")) {
            Ok(re) if re.is_match(trimmed) => ValidationOutcome {
                pass: true,
                detail: "matched pattern".into(),
            },
            Ok(_) => ValidationOutcome {
                pass: false,
                detail: format!("output did not match /{pattern}/"),
            },
            Err(_) => ValidationOutcome {
                pass: false,
                detail: "invalid regex reached run time (suite not validated at load)".into(),
            },
        },
        Validator::ContainsAll { terms } => {
            let haystack = output.to_lowercase();
            let missing: Vec<&str> = terms
                .iter()
                .filter(|t| !haystack.contains(&t.to_lowercase()))
                .map(|t| t.as_str())
                .collect();
            if missing.is_empty() {
                ValidationOutcome {
                    pass: true,
                    detail: "weak validation: all terms present".into(),
                }
            } else {
                ValidationOutcome {
                    pass: false,
                    detail: format!("missing terms: {}", missing.join(", ")),
                }
            }
        }
        Validator::DecodeOracle { scheme } => {
            let payload = case.payload.as_deref().unwrap_or_default();
            match oracle_decode(scheme, payload) {
                Ok(decoded) if trimmed == decoded => ValidationOutcome {
                    pass: true,
                    detail: "matches oracle decode".into(),
                },
                Ok(decoded) => ValidationOutcome {
                    pass: false,
                    detail: format!("oracle decoded '{decoded}', got '{trimmed}'"),
                },
                Err(e) => ValidationOutcome {
                    pass: false,
                    detail: format!("payload failed to decode: {e}"),
                },
            }
        }
    }
}
