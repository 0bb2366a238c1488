//! End-to-end retrieval-augmented answer chain.

use serde::{Deserialize, Serialize};

use super::VectorStore;
use crate::model::{build_prompt, complete, GenerationParams, ModelSpec, PromptSpec, Usage};
use crate::{Error, Result};

/// Instruction placed in front of retrieved context.
pub const RAG_ANSWER_INSTRUCTION: &str = "Answer the question using only the provided context. \
     If the context does not contain the answer, say you do not know.";

/// A grounded answer: the model's text plus the record ids of the chunks
/// that were placed in its context.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RagAnswer {
    pub answer: String,
    pub citations: Vec<u64>,
    pub usage: Usage,
}

/// Retrieves the top-`k` chunks for `question`, assembles a prompt with the
/// chunk texts as context (joined by `\n---\n`), and completes it against
/// the model.
pub fn rag_answer(
    question: &str,
    store: &VectorStore,
    model: &ModelSpec,
    k: usize,
    params: &GenerationParams,
) -> Result<RagAnswer> {
    if store.is_empty() {
        return Err(Error::Validation(
            "rag_answer requires a non-empty store".into(),
        ));
    }
    let results = store.query(question, k)?;
    let citations: Vec<u64> = results.iter().map(|r| r.record.record_id).collect();
    let context = results
        .iter()
        .map(|r| r.record.chunk.text.as_str())
        .collect::<Vec<_>>()
        .join("\n---\n");

    let spec = PromptSpec::new(RAG_ANSWER_INSTRUCTION)
        .with_input(question)
        .with_context(context);
    let completion = complete(model, &build_prompt(&spec)?, params)?;
    Ok(RagAnswer {
        answer: completion.text,
        citations,
        usage: completion.usage,
    })
}
