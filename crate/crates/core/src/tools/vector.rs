//! The RAG retrieval tool.

use std::sync::Arc;

use crate::agent::ToolSpec;
use crate::rag::VectorStore;
use crate::{Error, Result};

const TOP_K: usize = 3;

/// Wraps a vector store as the agent-facing `vector_db_query` tool. The
/// handler returns the top-3 chunk texts joined by newlines, raw:
/// neutralizing anything hostile inside retrieved documents is the agent's
/// responsibility, which is exactly the source/sink split the poisoning
/// exercise probes.
pub fn make_vector_query_tool(store: Arc<VectorStore>) -> Result<ToolSpec> {
    if store.is_empty() {
        return Err(Error::Validation(
            "vector_db_query requires a non-empty store".into(),
        ));
    }
    ToolSpec::new(
        "vector_db_query",
        "Searches the document store and returns the most relevant passages.",
        vec![],
        Box::new(move |input| {
            let results = store.query(input, TOP_K).map_err(|e| e.to_string())?;
            Ok(results
                .iter()
                .map(|r| r.record.chunk.text.as_str())
                .collect::<Vec<_>>()
                .join("\n"))
        }),
    )
}
