//! Exact-search vector store with line-oriented JSON persistence.
//!
//! Vector components are canonicalized to 9 significant digits at
//! insertion, so the in-memory store and its persisted form carry the same
//! values and save/load is a true identity. Queries are exhaustive cosine
//! scans; at desk scale nothing smarter is warranted.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{cosine, embed_hash, Chunk, EmbeddingVector};
use crate::{Error, Result};

/// One stored chunk with its embedding. Record ids are assigned at
/// insertion and strictly increase from 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoreRecord {
    pub record_id: u64,
    pub chunk: Chunk,
    pub vector: EmbeddingVector,
}

/// One ranked hit. Results sort by score descending, ties broken by the
/// smaller record id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalResult {
    pub record: StoreRecord,
    pub score: f64,
}

/// In-memory vector store over hash embeddings of a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorStore {
    dim: usize,
    records: Vec<StoreRecord>,
}

/// Shape of one persisted line (parse side; the write side is formatted by
/// hand so vector components carry exactly 9 significant digits).
#[derive(Deserialize)]
struct StoreLine {
    record_id: u64,
    doc_id: String,
    seq: u32,
    text: String,
    span: (usize, usize),
    vector: Vec<f64>,
}

/// Canonical 9-significant-digit decimal rendering, e.g. `6.25000000e-2`.
fn format_real(value: f64) -> String {
    format!("{value:.8e}")
}

/// Rounds to the value the canonical rendering parses back to.
fn canonicalize(value: f64) -> f64 {
    format_real(value).parse().unwrap_or(value)
}

impl VectorStore {
    pub fn new(dim: usize) -> Self {
        VectorStore {
            dim,
            records: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[StoreRecord] {
        &self.records
    }

    pub fn get(&self, record_id: u64) -> Option<&StoreRecord> {
        self.records.iter().find(|r| r.record_id == record_id)
    }

    /// Embeds and inserts chunks, returning the assigned record ids in
    /// input order.
    pub fn add(&mut self, chunks: Vec<Chunk>) -> Result<Vec<u64>> {
        let mut ids = Vec::with_capacity(chunks.len());
        for chunk in chunks {
            let mut vector = embed_hash(&chunk.text, self.dim)?;
            for v in &mut vector.values {
                *v = canonicalize(*v);
            }
            let record_id = self.records.last().map(|r| r.record_id + 1).unwrap_or(0);
            self.records.push(StoreRecord {
                record_id,
                chunk,
                vector,
            });
            ids.push(record_id);
        }
        Ok(ids)
    }

    /// Exhaustive cosine ranking of every record against the query text.
    /// Returns at most `k` results; cosine against a zero vector is 0.
    pub fn query(&self, query_text: &str, k: usize) -> Result<Vec<RetrievalResult>> {
        if k == 0 {
            return Err(Error::Validation("k must be at least 1".into()));
        }
        let query = embed_hash(query_text, self.dim)?;
        let mut results: Vec<RetrievalResult> = self
            .records
            .iter()
            .map(|record| RetrievalResult {
                score: cosine(&record.vector, &query),
                record: record.clone(),
            })
            .collect();
        results.sort_by(|a, b| {
            b.score
                .partial_cmp(&a.score)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.record.record_id.cmp(&b.record.record_id))
        });
        results.truncate(k);
        Ok(results)
    }

    fn render_line(record: &StoreRecord) -> String {
        let doc_id = serde_json::to_string(&record.chunk.doc_id).expect("string encodes");
        let text = serde_json::to_string(&record.chunk.text).expect("string encodes");
        let vector = record
            .vector
            .values
            .iter()
            .map(|&v| format_real(v))
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "{{\"record_id\":{},\"doc_id\":{},\"seq\":{},\"text\":{},\"span\":[{},{}],\"vector\":[{}]}}",
            record.record_id, doc_id, record.chunk.seq, text,
            record.chunk.span.0, record.chunk.span.1, vector,
        )
    }

    /// Writes one JSON object per line, ordered by record id. Returns the
    /// number of bytes written. Two saves of the same store are
    /// byte-identical.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<usize> {
        let path = path.as_ref();
        let mut out = String::new();
        for record in &self.records {
            out.push_str(&Self::render_line(record));
            out.push('\n');
        }
        let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        file.write_all(out.as_bytes())
            .map_err(|e| Error::io(path, e))?;
        Ok(out.len())
    }

    /// Loads a store saved by [`VectorStore::save`]. A malformed line is
    /// reported with its 1-based line number. An empty file loads as an
    /// empty store with the default dimension.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let reader = std::io::BufReader::new(file);

        let mut store = VectorStore::new(super::DEFAULT_DIM);
        let mut last_id: Option<u64> = None;
        for (index, line) in reader.lines().enumerate() {
            let line_no = index + 1;
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed: StoreLine = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
            if store.records.is_empty() {
                store.dim = parsed.vector.len();
            } else if parsed.vector.len() != store.dim {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!(
                        "vector dimension {} differs from store dimension {}",
                        parsed.vector.len(),
                        store.dim
                    ),
                });
            }
            if let Some(prev) = last_id {
                if parsed.record_id <= prev {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!(
                            "record_id {} not increasing (previous {prev})",
                            parsed.record_id
                        ),
                    });
                }
            }
            last_id = Some(parsed.record_id);
            store.records.push(StoreRecord {
                record_id: parsed.record_id,
                chunk: Chunk {
                    doc_id: parsed.doc_id,
                    seq: parsed.seq,
                    text: parsed.text,
                    span: parsed.span,
                },
                vector: EmbeddingVector {
                    values: parsed.vector,
                },
            });
        }
        Ok(store)
    }
}
