//! `rag ingest`, `rag query`, `rag answer`.

use std::path::PathBuf;

use clap::Subcommand;

use llmlab_core::rag::{
    chunk_fixed, chunk_paragraphs, load_path, rag_answer, strip_html, VectorStore, DEFAULT_DIM,
};
use llmlab_core::Error;

use crate::output::print_json;
use crate::{Context, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Subcommand)]
pub enum RagCommand {
    /// Load documents, chunk, embed, and persist them into a store
    Ingest {
        /// Files or directories (.txt/.md/.csv)
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Store file; created when absent, appended to when present
        #[arg(long)]
        store: PathBuf,
        /// Chunk size in characters
        #[arg(long, default_value_t = 512)]
        size: usize,
        /// Chunk overlap in characters (fixed chunker only)
        #[arg(long, default_value_t = 64)]
        overlap: usize,
        /// Embedding dimension for a newly created store
        #[arg(long, default_value_t = DEFAULT_DIM)]
        dim: usize,
        /// Chunking strategy
        #[arg(long, default_value = "fixed", value_parser = ["fixed", "paragraphs"])]
        chunker: String,
        /// When to strip HTML markup before chunking
        #[arg(long, default_value = "auto", value_parser = ["auto", "always", "never"])]
        strip: String,
    },
    /// Rank stored chunks against a query
    Query {
        query: String,
        #[arg(long)]
        store: PathBuf,
        #[arg(short, default_value_t = 5)]
        k: usize,
    },
    /// Answer a question from the store through a configured model
    Answer {
        question: String,
        #[arg(long)]
        store: PathBuf,
        /// Model id (falls back to the global --model)
        #[arg(long)]
        model: Option<String>,
        #[arg(short, default_value_t = 4)]
        k: usize,
    },
}

fn open_store(path: &PathBuf) -> Result<VectorStore, Error> {
    if !path.exists() {
        return Err(Error::Config(format!(
            "missing store: {} (run `rag ingest` first)",
            path.display()
        )));
    }
    VectorStore::load(path)
}

pub fn run(context: &Context, command: RagCommand) -> Result<i32, Error> {
    match command {
        RagCommand::Ingest {
            paths,
            store: store_path,
            size,
            overlap,
            dim,
            chunker,
            strip,
        } => {
            let mut store = if store_path.exists() {
                VectorStore::load(&store_path)?
            } else {
                VectorStore::new(dim)
            };

            let mut documents = Vec::new();
            let mut warnings = Vec::new();
            for path in &paths {
                let mut loaded = load_path(path)?;
                documents.append(&mut loaded.documents);
                warnings.append(&mut loaded.warnings);
            }
            for warning in &warnings {
                eprintln!("warning: {warning}");
            }

            let mut chunk_count = 0usize;
            let documents_count = documents.len();
            for doc in documents {
                let content = match strip.as_str() {
                    "always" => strip_html(&doc.content),
                    "never" => doc.content.clone(),
                    _ => {
                        if doc.content.trim_start().starts_with('<') {
                            strip_html(&doc.content)
                        } else {
                            doc.content.clone()
                        }
                    }
                };
                let chunks = match chunker.as_str() {
                    "paragraphs" => chunk_paragraphs(&doc.id, &content, size)?,
                    _ => chunk_fixed(&doc.id, &content, size, overlap)?,
                };
                chunk_count += chunks.len();
                store.add(chunks)?;
            }
            let bytes = store.save(&store_path)?;

            if context.json {
                print_json(&serde_json::json!({
                    "documents": documents_count,
                    "chunks": chunk_count,
                    "records": store.len(),
                    "bytes": bytes,
                    "skipped": warnings.len(),
                }))?;
            } else {
                println!(
                    "ingested {documents_count} documents as {chunk_count} chunks ({} records, {bytes} bytes)",
                    store.len()
                );
            }
            Ok(EXIT_OK)
        }
        RagCommand::Query {
            query,
            store: store_path,
            k,
        } => {
            if k == 0 {
                eprintln!("error: k must be at least 1");
                return Ok(EXIT_USAGE);
            }
            let store = open_store(&store_path)?;
            let results = if store.is_empty() {
                Vec::new()
            } else {
                store.query(&query, k)?
            };
            if context.json {
                let rows: Vec<serde_json::Value> = results
                    .iter()
                    .map(|r| {
                        serde_json::json!({
                            "record_id": r.record.record_id,
                            "score": r.score,
                            "doc_id": r.record.chunk.doc_id,
                            "seq": r.record.chunk.seq,
                            "text": r.record.chunk.text,
                        })
                    })
                    .collect();
                print_json(&rows)?;
            } else {
                for r in &results {
                    println!(
                        "{:+.4}  #{} {}#{}: {}",
                        r.score,
                        r.record.record_id,
                        r.record.chunk.doc_id,
                        r.record.chunk.seq,
                        r.record.chunk.text.replace('\n', " ")
                    );
                }
            }
            Ok(EXIT_OK)
        }
        RagCommand::Answer {
            question,
            store: store_path,
            model,
            k,
        } => {
            let store = open_store(&store_path)?;
            let config = context.load_config()?;
            let model_id = model
                .or_else(|| context.model_override.clone())
                .ok_or_else(|| Error::Config("no model selected (use --model)".into()))?;
            let spec = context.find_model(&config, &model_id)?;

            let answer = rag_answer(&question, &store, &spec, k, &config.defaults)?;
            if context.json {
                print_json(&answer)?;
            } else {
                println!("{}", answer.answer);
                println!(
                    "citations: {} (tokens {}+{}, estimated)",
                    answer
                        .citations
                        .iter()
                        .map(|id| format!("#{id}"))
                        .collect::<Vec<_>>()
                        .join(", "),
                    answer.usage.prompt_tokens,
                    answer.usage.completion_tokens
                );
            }
            Ok(EXIT_OK)
        }
    }
}
