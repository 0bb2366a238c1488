//! Shared output helpers.

use llmlab_core::Error;

/// Canonical JSON printing: through a value tree so object keys are sorted,
/// pretty-printed, trailing newline.
pub fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Error> {
    println!("{}", to_canonical_json(value)?);
    Ok(())
}

pub fn to_canonical_json<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    let tree = serde_json::to_value(value).map_err(|e| Error::Parse {
        line: 0,
        message: e.to_string(),
    })?;
    serde_json::to_string_pretty(&tree).map_err(|e| Error::Parse {
        line: 0,
        message: e.to_string(),
    })
}
