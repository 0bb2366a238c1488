//! An offline-first LLM application framework and security laboratory.
//!
//! The crate bundles everything needed to build, attack, and defend small
//! LLM applications without touching a live model:
//!
//! - [`model`] — prompt construction, a deterministic scripted backend, an
//!   OpenAI-compatible HTTP chat backend, token/cost accounting, and a
//!   multi-model prompt laboratory.
//! - [`rag`] — document loaders, HTML stripping, chunkers, deterministic
//!   hash embeddings, a persisted vector store, and the end-to-end
//!   retrieval-augmented answer chain.
//! - [`agent`] — a ReAct agent: template rendering, output parsing, tool
//!   registry with input validation, observation sanitization, and a
//!   bounded execution loop with full tracing.
//! - [`tools`] — built-in tools: a mini SQL engine with vulnerable and
//!   hardened database tools, a policy-gated terminal, the vector-store
//!   query tool, a calculator, and declarative threat-intel API adapters.
//! - [`seclab`] — six attack/defense exercises with machine-checked
//!   compromise detectors and the vulnerable/hardened asymmetry contract.
//! - [`bench`] — a known-answer benchmark harness with deobfuscation case
//!   generators and deterministic report rendering.
//!
//! Everything in the default configuration runs offline: model behavior is
//! scripted, the terminal is faked, and network adapters read fixtures.

pub mod agent;
pub mod bench;
pub mod error;
pub mod model;
pub mod rag;
pub mod seclab;
pub mod tools;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
