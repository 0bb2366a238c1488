//! Retrieval-augmented generation pipeline.
//!
//! Extract-transform-load for a local corpus: loaders for text/CSV files
//! and URLs, HTML stripping, two chunkers, deterministic signed-hash
//! embeddings, a persisted exact-search vector store, and the end-to-end
//! answer chain that retrieves context and hands it to a model.

mod answer;
mod chunk;
mod embed;
mod html;
mod loader;
mod store;

pub use answer::{rag_answer, RagAnswer, RAG_ANSWER_INSTRUCTION};
pub use chunk::{chunk_fixed, chunk_paragraphs};
pub use embed::{embed_hash, fnv1a_64, DEFAULT_DIM};
pub use html::strip_html;
pub use loader::{load_path, load_url_fixture, load_url_live, Loaded, UrlFixture};
pub use store::{RetrievalResult, StoreRecord, VectorStore};

use serde::{Deserialize, Serialize};

/// A loaded document, content exactly as read from its source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    /// Path or URL the content came from.
    pub source: String,
    pub content: String,
    #[serde(default, skip_serializing_if = "std::collections::BTreeMap::is_empty")]
    pub metadata: std::collections::BTreeMap<String, String>,
}

impl Document {
    pub fn new(
        id: impl Into<String>,
        source: impl Into<String>,
        content: impl Into<String>,
    ) -> Self {
        Document {
            id: id.into(),
            source: source.into(),
            content: content.into(),
            metadata: std::collections::BTreeMap::new(),
        }
    }
}

/// A piece of a document. `span` is the `(start, end)` character range in
/// the source document; `seq` runs densely from 0 within each document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub doc_id: String,
    pub seq: u32,
    pub text: String,
    pub span: (usize, usize),
}

/// A unit-norm (or all-zero) embedding of fixed dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingVector {
    pub values: Vec<f64>,
}

impl EmbeddingVector {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }
}

/// Cosine similarity, defined as 0 when either side has zero norm.
pub fn cosine(a: &EmbeddingVector, b: &EmbeddingVector) -> f64 {
    let na = a.l2_norm();
    let nb = b.l2_norm();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let dot: f64 = a.values.iter().zip(&b.values).map(|(x, y)| x * y).sum();
    (dot / (na * nb)).clamp(-1.0, 1.0)
}

#[cfg(test)]
mod tests;
