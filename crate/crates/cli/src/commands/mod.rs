pub mod bench;
pub mod chat;
pub mod lab;
pub mod models;
pub mod rag;
