//! Document loaders: filesystem (txt/md/csv) and URLs.
//!
//! URL loading comes in two modes. Live mode performs a real GET and is
//! excluded from the default test suite; fixture mode reads the body from a
//! JSON map keyed by URL so pipelines stay offline.

use std::collections::BTreeMap;
use std::path::Path;

use super::Document;
use crate::{Error, Result};

/// Outcome of a filesystem load: the documents plus a warning line for
/// every path that was skipped (unsupported extension).
#[derive(Debug, Default)]
pub struct Loaded {
    pub documents: Vec<Document>,
    pub warnings: Vec<String>,
}

/// Loads documents from a file or directory.
///
/// `.txt`/`.md` files load as a single document; `.csv` files load one
/// document per data row with content `"col1: v1; col2: v2; …"` built from
/// the header row; directories are walked recursively with results sorted
/// by path. Files with other extensions are skipped with a warning.
pub fn load_path(path: impl AsRef<Path>) -> Result<Loaded> {
    let path = path.as_ref();
    let mut loaded = Loaded::default();
    if path.is_dir() {
        let mut files: Vec<_> = walkdir::WalkDir::new(path)
            .into_iter()
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::io(path, std::io::Error::other(e)))?
            .into_iter()
            .filter(|entry| entry.file_type().is_file())
            .map(|entry| entry.into_path())
            .collect();
        files.sort();
        for file in files {
            load_file(&file, &mut loaded)?;
        }
    } else if path.exists() {
        load_file(path, &mut loaded)?;
    } else {
        return Err(Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory"),
        ));
    }
    Ok(loaded)
}

fn load_file(path: &Path, loaded: &mut Loaded) -> Result<()> {
    let extension = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .unwrap_or_default();
    match extension.as_str() {
        "txt" | "md" => {
            let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            loaded.documents.push(Document::new(
                path.display().to_string(),
                path.display().to_string(),
                content,
            ));
        }
        "csv" => load_csv(path, loaded)?,
        _ => loaded
            .warnings
            .push(format!("skipped unsupported file: {}", path.display())),
    }
    Ok(())
}

fn load_csv(path: &Path, loaded: &mut Loaded) -> Result<()> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| match e.kind() {
        csv::ErrorKind::Io(_) => Error::io(path, std::io::Error::other(e.to_string())),
        _ => Error::Parse {
            line: 1,
            message: e.to_string(),
        },
    })?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            line: index + 2,
            message: e.to_string(),
        })?;
        let content = headers
            .iter()
            .zip(record.iter())
            .map(|(h, v)| format!("{h}: {v}"))
            .collect::<Vec<_>>()
            .join("; ");
        loaded.documents.push(Document::new(
            format!("{}#row{}", path.display(), index + 1),
            path.display().to_string(),
            content,
        ));
    }
    Ok(())
}

/// URL → body map used by fixture-mode URL loading.
#[derive(Debug, Clone, Default)]
pub struct UrlFixture {
    bodies: BTreeMap<String, String>,
}

impl UrlFixture {
    pub fn new(bodies: BTreeMap<String, String>) -> Self {
        UrlFixture { bodies }
    }

    /// Loads a JSON object mapping URL → body text.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let bodies: BTreeMap<String, String> =
            serde_json::from_str(&text).map_err(|e| Error::Parse {
                line: e.line(),
                message: e.to_string(),
            })?;
        Ok(UrlFixture { bodies })
    }
}

fn check_scheme(url: &str) -> Result<()> {
    if url.starts_with("http://") || url.starts_with("https://") {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "url scheme must be http or https: {url}"
        )))
    }
}

/// Loads a URL from a fixture map; the URL must be present.
pub fn load_url_fixture(url: &str, fixture: &UrlFixture) -> Result<Document> {
    check_scheme(url)?;
    let body = fixture.bodies.get(url).ok_or_else(|| {
        Error::io(
            url,
            std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("url not present in fixture: {url}"),
            ),
        )
    })?;
    Ok(Document::new(url, url, body.clone()))
}

/// Fetches a URL over the network. Not used by any default configuration
/// or automated test path except against loopback servers.
pub fn load_url_live(url: &str) -> Result<Document> {
    check_scheme(url)?;
    let response = reqwest::blocking::get(url).map_err(|e| Error::Http(e.to_string()))?;
    let status = response.status().as_u16();
    let body = response.text().map_err(|e| Error::Http(e.to_string()))?;
    if !(200..300).contains(&status) {
        return Err(Error::Backend {
            status,
            excerpt: body.chars().take(200).collect(),
        });
    }
    Ok(Document::new(url, url, body))
}
