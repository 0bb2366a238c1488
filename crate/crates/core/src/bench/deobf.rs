//! Deobfuscation schemes and case generation.
//!
//! Hex and base64 ride on the `hex` and `base64` crates; the test suites
//! check both against hand-written reference decoders. XOR applies the key
//! byte-wise and renders the result as lowercase hex (an XOR'd byte string
//! is rarely printable).

use base64::Engine;
use serde::{Deserialize, Serialize};

use super::{TaskCase, Validator};
use crate::model::PromptSpec;
use crate::rag::fnv1a_64;
use crate::{Error, Result};

/// An obfuscation scheme with everything needed to decode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "lowercase")]
pub enum DeobfScheme {
    Hex,
    Base64,
    Xor { key: u8 },
}

impl DeobfScheme {
    fn label(&self) -> &'static str {
        match self {
            DeobfScheme::Hex => "hex",
            DeobfScheme::Base64 => "base64",
            DeobfScheme::Xor { .. } => "xor",
        }
    }
}

/// Encodes plaintext under the scheme.
pub fn oracle_encode(scheme: &DeobfScheme, plaintext: &str) -> String {
    match scheme {
        DeobfScheme::Hex => hex::encode(plaintext.as_bytes()),
        DeobfScheme::Base64 => base64::engine::general_purpose::STANDARD.encode(plaintext),
        DeobfScheme::Xor { key } => {
            let xored: Vec<u8> = plaintext.bytes().map(|b| b ^ key).collect();
            hex::encode(xored)
        }
    }
}

/// Decodes a payload under the scheme.
pub fn oracle_decode(scheme: &DeobfScheme, payload: &str) -> Result<String> {
    let bytes = match scheme {
        DeobfScheme::Hex => hex::decode(payload.trim())
            .map_err(|e| Error::Validation(format!("bad hex payload: {e}")))?,
        DeobfScheme::Base64 => base64::engine::general_purpose::STANDARD
            .decode(payload.trim())
            .map_err(|e| Error::Validation(format!("bad base64 payload: {e}")))?,
        DeobfScheme::Xor { key } => hex::decode(payload.trim())
            .map_err(|e| Error::Validation(format!("bad xor-hex payload: {e}")))?
            .into_iter()
            .map(|b| b ^ key)
            .collect(),
    };
    String::from_utf8(bytes).map_err(|e| Error::Validation(format!("decoded non-utf8: {e}")))
}

fn decode_instruction(scheme: &DeobfScheme) -> String {
    match scheme {
        DeobfScheme::Hex => {
            "Decode the following hex-encoded string and reply with only the decoded plaintext."
                .to_string()
        }
        DeobfScheme::Base64 => {
            "Decode the following base64-encoded string and reply with only the decoded plaintext."
                .to_string()
        }
        DeobfScheme::Xor { key } => format!(
            "The following hex-encoded bytes were XOR-encrypted with the single-byte key \
             0x{key:02x}. Decrypt them and reply with only the plaintext."
        ),
    }
}

/// Builds a deobfuscation case: the payload is the scheme's encoding of the
/// plaintext, the prompt asks for the decode, and the validator is the
/// decode oracle, so the expected answer is derived rather than asserted.
pub fn make_deobf_case(scheme: DeobfScheme, plaintext: &str) -> TaskCase {
    let payload = oracle_encode(&scheme, plaintext);
    let id = format!(
        "deobf-{}-{:08x}",
        scheme.label(),
        fnv1a_64(plaintext.as_bytes()) as u32
    );
    TaskCase {
        id,
        prompt: PromptSpec::new(decode_instruction(&scheme)).with_input(payload.clone()),
        expected: plaintext.to_string(),
        payload: Some(payload),
        validator: Validator::DecodeOracle { scheme },
    }
}
