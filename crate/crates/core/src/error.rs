//! Crate-wide error type.

use std::path::PathBuf;

/// Errors surfaced by the framework's fallible operations.
///
/// Domain-specific failures that are part of normal control flow (an agent
/// tool rejecting input, a SQL statement failing to parse) have their own
/// types near their modules; this enum covers everything that propagates to
/// a caller.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition or field invariant was violated.
    #[error("validation error: {0}")]
    Validation(String),

    /// A configuration file or environment reference is unusable.
    #[error("configuration error: {0}")]
    Config(String),

    /// Filesystem access failed.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A persisted file is malformed; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A remote backend answered with a non-2xx status or an unusable body.
    #[error("backend error (status {status}): {excerpt}")]
    Backend { status: u16, excerpt: String },

    /// HTTP transport failure (connection refused, timeout, bad URL).
    #[error("http error: {0}")]
    Http(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True when the error indicates bad user/config input rather than a
    /// runtime failure. The CLI maps these to its usage exit code.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Validation(_) | Error::Config(_) | Error::Parse { .. }
        )
    }
}
