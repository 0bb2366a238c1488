//! Tool input validation.
//!
//! Constraints are conjunctive and checked in declaration order; the first
//! failure is reported with its constraint name. Validation runs before a
//! tool handler is ever invoked, so handlers can rely on it.

use serde::{Deserialize, Serialize};

/// What a constraint checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// Every character is ASCII alphanumeric.
    Alphanumeric,
    /// The whole input matches the pattern (implicitly anchored).
    Regex { pattern: String },
    /// At most `n` characters.
    MaxLength { n: usize },
    /// Input equals one of the listed values.
    Enum { values: Vec<String> },
}

/// One named input constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConstraint {
    pub name: String,
    pub kind: ConstraintKind,
}

impl FieldConstraint {
    pub fn alphanumeric() -> Self {
        FieldConstraint {
            name: "alphanumeric".into(),
            kind: ConstraintKind::Alphanumeric,
        }
    }

    pub fn max_length(n: usize) -> Self {
        FieldConstraint {
            name: "max_length".into(),
            kind: ConstraintKind::MaxLength { n },
        }
    }

    pub fn regex(pattern: impl Into<String>) -> Self {
        FieldConstraint {
            name: "regex".into(),
            kind: ConstraintKind::Regex {
                pattern: pattern.into(),
            },
        }
    }

    pub fn one_of(values: Vec<String>) -> Self {
        FieldConstraint {
            name: "enum".into(),
            kind: ConstraintKind::Enum { values },
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    fn check(&self, input: &str) -> bool {
        match &self.kind {
            ConstraintKind::Alphanumeric => input.chars().all(|c| c.is_ascii_alphanumeric()),
            ConstraintKind::Regex { pattern } => {
                match regex::Regex::new(&format!("^(?:{pattern})$")) {
                    Ok(re) => re.is_match(input),
                    Err(_) => false, // unparseable pattern rejects everything
                }
            }
            ConstraintKind::MaxLength { n } => input.chars().count() <= *n,
            ConstraintKind::Enum { values } => values.iter().any(|v| v == input),
        }
    }
}

/// Rejection raised by [`validate_input`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[error("input rejected by constraint '{constraint}': {excerpt}")]
pub struct ValidationError {
    pub constraint: String,
    /// First characters of the offending input.
    pub excerpt: String,
}

fn excerpt_of(input: &str) -> String {
    let mut s: String = input.chars().take(48).collect();
    if input.chars().count() > 48 {
        s.push('…');
    }
    s
}

/// Applies a tool's constraints in order, returning the input unchanged on
/// success or the first failing constraint.
pub fn validate_input<'a>(
    tool: &super::ToolSpec,
    input: &'a str,
) -> std::result::Result<&'a str, ValidationError> {
    for constraint in &tool.constraints {
        if !constraint.check(input) {
            return Err(ValidationError {
                constraint: constraint.name.clone(),
                excerpt: excerpt_of(input),
            });
        }
    }
    Ok(input)
}
