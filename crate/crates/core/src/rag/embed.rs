//! Deterministic signed-hash bag-of-tokens embedding.
//!
//! Real embedding models need network or weights; this stand-in is a pure
//! integer-hash construction so retrieval behaves identically on every run
//! and platform. Tokens are lowercased alphanumeric runs; each token adds
//! ±1 (sign from bit 63 of its FNV-1a hash) to component `hash mod dim`,
//! and the result is L2-normalized.

use super::EmbeddingVector;
use crate::{Error, Result};

/// Default embedding dimension.
pub const DEFAULT_DIM: usize = 256;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// FNV-1a 64-bit hash.
pub fn fnv1a_64(bytes: &[u8]) -> u64 {
    let mut hash = FNV_OFFSET;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

fn tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
}

/// Embeds `text` into a `dim`-dimensional unit vector (all-zero for an
/// empty token set). Requires `dim >= 8`.
pub fn embed_hash(text: &str, dim: usize) -> Result<EmbeddingVector> {
    if dim < 8 {
        return Err(Error::Validation(format!(
            "embedding dimension must be at least 8, got {dim}"
        )));
    }
    let mut values = vec![0.0f64; dim];
    let mut any = false;
    for token in tokens(text) {
        any = true;
        let hash = fnv1a_64(token.as_bytes());
        let index = (hash % dim as u64) as usize;
        let sign = if hash >> 63 == 0 { 1.0 } else { -1.0 };
        values[index] += sign;
    }
    if any {
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for v in &mut values {
                *v /= norm;
            }
        }
    }
    Ok(EmbeddingVector { values })
}
