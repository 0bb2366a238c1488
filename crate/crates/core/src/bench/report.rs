//! Benchmark report assembly and rendering.
//!
//! Reports are deterministic up to latency: rows sort by (model id, case
//! id), aggregates keep exact pass/case counts, and the JSON rendering
//! goes through a sorted-key value tree so two renders of the same report
//! are byte-identical. Latency can be masked for byte-comparisons.

use serde::{Deserialize, Serialize};

use crate::model::{Cost, Usage};
use crate::Result;

/// One (model, case) evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub model_id: String,
    pub case_id: String,
    pub pass: bool,
    pub detail: String,
    pub usage: Usage,
    pub cost: Cost,
    pub latency_ms: u64,
}

/// Per-model roll-up with the exact rational pass rate carried as counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelAggregate {
    pub model_id: String,
    pub passes: u32,
    pub cases: u32,
    pub pass_rate: f64,
    pub usage: Usage,
    pub cost: Cost,
}

/// A full suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub suite_id: String,
    pub rows: Vec<BenchRow>,
    pub aggregates: Vec<ModelAggregate>,
}

impl BenchReport {
    /// Sorts rows and computes per-model aggregates.
    pub fn assemble(suite_id: String, mut rows: Vec<BenchRow>) -> Self {
        rows.sort_by(|a, b| {
            a.model_id
                .cmp(&b.model_id)
                .then_with(|| a.case_id.cmp(&b.case_id))
        });
        let mut aggregates: Vec<ModelAggregate> = Vec::new();
        for row in &rows {
            if aggregates.last().map(|a| a.model_id.as_str()) != Some(row.model_id.as_str()) {
                aggregates.push(ModelAggregate {
                    model_id: row.model_id.clone(),
                    passes: 0,
                    cases: 0,
                    pass_rate: 0.0,
                    usage: Usage::default(),
                    cost: Cost::zero(),
                });
            }
            let aggregate = aggregates.last_mut().expect("pushed above");
            aggregate.cases += 1;
            if row.pass {
                aggregate.passes += 1;
            }
            aggregate.usage += row.usage;
            aggregate.cost += row.cost;
        }
        for aggregate in &mut aggregates {
            aggregate.pass_rate = aggregate.passes as f64 / aggregate.cases as f64;
        }
        BenchReport {
            suite_id,
            rows,
            aggregates,
        }
    }

    /// Zeroes every latency field, for byte-exact determinism comparisons.
    pub fn with_masked_latency(mut self) -> Self {
        for row in &mut self.rows {
            row.latency_ms = 0;
        }
        self
    }
}

/// Output encodings for [`render_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            "markdown" => Ok(ReportFormat::Markdown),
            other => Err(crate::Error::Validation(format!(
                "unknown report format '{other}'"
            ))),
        }
    }
}

fn pass_label(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn render_text(report: &BenchReport) -> String {
    let headers = ["model", "case", "result", "tokens", "cost", "ms", "detail"];
    let mut table: Vec<[String; 7]> = Vec::with_capacity(report.rows.len());
    for row in &report.rows {
        table.push([
            row.model_id.clone(),
            row.case_id.clone(),
            pass_label(row.pass).to_string(),
            format!(
                "{}+{}",
                row.usage.prompt_tokens, row.usage.completion_tokens
            ),
            row.cost.to_decimal_string(),
            row.latency_ms.to_string(),
            row.detail.clone(),
        ]);
    }
    let mut widths = [0usize; 7];
    for (i, h) in headers.iter().enumerate() {
        widths[i] = h.chars().count();
    }
    for row in &table {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }

    let render_line = |cells: &[String; 7]| -> String {
        cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:<width$}", c, width = widths[i]))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };

    let mut out = String::new();
    out.push_str(&format!("suite: {}\n", report.suite_id));
    let header_cells: [String; 7] = headers.map(String::from);
    out.push_str(&render_line(&header_cells));
    out.push('\n');
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 12));
    out.push('\n');
    for row in &table {
        out.push_str(&render_line(row));
        out.push('\n');
    }
    out.push('\n');
    for aggregate in &report.aggregates {
        out.push_str(&format!(
            "{}: {}/{} passed (rate {:.3}), cost {} (token counts are estimates)\n",
            aggregate.model_id,
            aggregate.passes,
            aggregate.cases,
            aggregate.pass_rate,
            aggregate.cost.to_decimal_string(),
        ));
    }
    out
}

fn render_markdown(report: &BenchReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("# Benchmark report: {}\n\n", report.suite_id));
    out.push_str("| model | case | result | tokens | cost | ms | detail |\n");
    out.push_str("|---|---|---|---|---|---|---|\n");
    for row in &report.rows {
        out.push_str(&format!(
            "| {} | {} | {} | {}+{} | {} | {} | {} |\n",
            row.model_id,
            row.case_id,
            pass_label(row.pass),
            row.usage.prompt_tokens,
            row.usage.completion_tokens,
            row.cost.to_decimal_string(),
            row.latency_ms,
            row.detail.replace('|', "\\|"),
        ));
    }
    out.push('\n');
    out.push_str("| model | passed | cases | rate |\n|---|---|---|---|\n");
    for aggregate in &report.aggregates {
        out.push_str(&format!(
            "| {} | {} | {} | {:.3} |\n",
            aggregate.model_id, aggregate.passes, aggregate.cases, aggregate.pass_rate
        ));
    }
    out
}

fn render_json(report: &BenchReport) -> Result<String> {
    // through a Value so object keys serialize sorted
    let value = serde_json::to_value(report).map_err(|e| crate::Error::Parse {
        line: 0,
        message: e.to_string(),
    })?;
    let mut text = serde_json::to_string_pretty(&value).map_err(|e| crate::Error::Parse {
        line: 0,
        message: e.to_string(),
    })?;
    text.push('\n');
    Ok(text)
}

/// Renders a report; byte-deterministic for a given report in every format.
pub fn render_report(report: &BenchReport, format: ReportFormat) -> Result<Vec<u8>> {
    let text = match format {
        ReportFormat::Text => render_text(report),
        ReportFormat::Markdown => render_markdown(report),
        ReportFormat::Json => render_json(report)?,
    };
    Ok(text.into_bytes())
}
