//! Declarative threat-intelligence API adapters.
//!
//! Each adapter is a URL template with one `{query}` placeholder plus a
//! list of response field paths to extract. Live mode performs the GET
//! (key header from the configured environment variable); fixture mode
//! reads the response body from a JSON map keyed by query, so tests and
//! default configurations stay offline. Output is a pure function of the
//! spec and the response body.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::agent::ToolSpec;
use crate::{Error, Result};

/// Header carrying the API key in live mode.
const KEY_HEADER: &str = "x-api-key";
const REQUEST_TIMEOUT: Duration = Duration::from_secs(30);

/// Where responses come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApiMode {
    Live,
    /// Path to a JSON map of query → response body object.
    Fixture(PathBuf),
}

/// One adapter definition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiToolSpec {
    pub name: String,
    /// Must contain exactly one `{query}` placeholder.
    pub url_template: String,
    /// Environment variable naming the API key for live mode, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub header_env: Option<String>,
    /// Dotted response field paths; numeric segments index arrays.
    pub extract: Vec<String>,
    pub mode: ApiMode,
}

impl ApiToolSpec {
    pub fn validate(&self) -> Result<()> {
        if self.url_template.matches("{query}").count() != 1 {
            return Err(Error::Validation(format!(
                "url template must contain exactly one {{query}} placeholder: {}",
                self.url_template
            )));
        }
        if self.extract.is_empty() {
            return Err(Error::Validation(
                "at least one extract path is required".into(),
            ));
        }
        Ok(())
    }
}

/// Shipped preset names.
pub const PRESET_NAMES: [&str; 5] = [
    "ip_reputation",
    "whois_lookup",
    "dns_records",
    "url_reputation",
    "cve_latest",
];

/// Returns a shipped adapter preset. Live URLs are defaults and expected to
/// be overridden by configuration where they drift.
pub fn preset(name: &str, mode: ApiMode) -> Option<ApiToolSpec> {
    let (url_template, header_env, extract): (&str, Option<&str>, &[&str]) = match name {
        "ip_reputation" => (
            "https://www.virustotal.com/api/v3/ip_addresses/{query}",
            Some("VT_API_KEY"),
            &[
                "data.attributes.last_analysis_stats.malicious",
                "data.attributes.reputation",
            ],
        ),
        "whois_lookup" => (
            "https://ipwho.is/{query}",
            None,
            &["country", "connection.isp", "connection.org"],
        ),
        "dns_records" => (
            "https://dns.google/resolve?name={query}",
            None,
            &["Status", "Answer.0.data"],
        ),
        "url_reputation" => (
            "https://www.virustotal.com/api/v3/urls/{query}",
            Some("VT_API_KEY"),
            &["data.attributes.last_analysis_stats.malicious"],
        ),
        "cve_latest" => (
            "https://app.opencve.io/api/cve?search={query}",
            Some("OPENCVE_API_KEY"),
            &["results.0.cve_id", "results.0.description"],
        ),
        _ => return None,
    };
    Some(ApiToolSpec {
        name: name.to_string(),
        url_template: url_template.to_string(),
        header_env: header_env.map(str::to_string),
        extract: extract.iter().map(|s| s.to_string()).collect(),
        mode,
    })
}

/// RFC 3986 percent-encoding of everything but unreserved characters.
fn encode_query(query: &str) -> String {
    let mut out = String::with_capacity(query.len());
    for byte in query.bytes() {
        match byte {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'.' | b'_' | b'~' => {
                out.push(byte as char)
            }
            other => out.push_str(&format!("%{other:02X}")),
        }
    }
    out
}

fn walk_path<'a>(value: &'a serde_json::Value, path: &str) -> Option<&'a serde_json::Value> {
    let mut current = value;
    for segment in path.split('.') {
        current = match current {
            serde_json::Value::Object(map) => map.get(segment)?,
            serde_json::Value::Array(items) => items.get(segment.parse::<usize>().ok()?)?,
            _ => return None,
        };
    }
    Some(current)
}

fn render_value(value: &serde_json::Value) -> String {
    match value {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Extracts the configured field paths from a response body, one
/// `path: value` line per path, `<missing>` for absent paths.
fn extract_fields(spec: &ApiToolSpec, body: &serde_json::Value) -> String {
    spec.extract
        .iter()
        .map(|path| match walk_path(body, path) {
            Some(value) => format!("{path}: {}", render_value(value)),
            None => format!("{path}: <missing>"),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn fetch_live(spec: &ApiToolSpec, query: &str) -> Result<serde_json::Value> {
    let url = spec.url_template.replace("{query}", &encode_query(query));
    let client = reqwest::blocking::Client::builder()
        .timeout(REQUEST_TIMEOUT)
        .build()
        .map_err(|e| Error::Http(e.to_string()))?;
    let mut request = client.get(&url);
    if let Some(var) = &spec.header_env {
        let key = std::env::var(var).map_err(|_| {
            Error::Config(format!(
                "adapter '{}' requires API key from unset environment variable {var}",
                spec.name
            ))
        })?;
        request = request.header(KEY_HEADER, key);
    }
    let response = request.send().map_err(|e| Error::Http(e.to_string()))?;
    let status = response.status().as_u16();
    let text = response.text().map_err(|e| Error::Http(e.to_string()))?;
    if !(200..300).contains(&status) {
        return Err(Error::Backend {
            status,
            excerpt: text.chars().take(200).collect(),
        });
    }
    serde_json::from_str(&text).map_err(|_| Error::Backend {
        status,
        excerpt: text.chars().take(200).collect(),
    })
}

fn fetch_fixture(spec: &ApiToolSpec, path: &PathBuf, query: &str) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bodies: BTreeMap<String, serde_json::Value> =
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
    bodies.get(query).cloned().ok_or_else(|| {
        Error::Config(format!(
            "fixture {} has no entry for query '{query}' (adapter '{}')",
            path.display(),
            spec.name
        ))
    })
}

/// Queries the adapter and renders the extracted fields.
pub fn api_tool_call(spec: &ApiToolSpec, query: &str) -> Result<String> {
    spec.validate()?;
    let body = match &spec.mode {
        ApiMode::Live => fetch_live(spec, query)?,
        ApiMode::Fixture(path) => fetch_fixture(spec, path, query)?,
    };
    Ok(extract_fields(spec, &body))
}

/// Wraps an adapter as an agent tool named after it.
pub fn make_api_tool(spec: ApiToolSpec) -> Result<ToolSpec> {
    spec.validate()?;
    let name = spec.name.clone();
    let description = format!("Queries the {} threat-intelligence service.", spec.name);
    ToolSpec::new(
        name,
        description,
        vec![],
        Box::new(move |input| api_tool_call(&spec, input).map_err(|e| e.to_string())),
    )
}
