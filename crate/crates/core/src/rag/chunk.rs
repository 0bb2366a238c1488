//! Chunkers: fixed-size sliding window and paragraph packing.
//!
//! All sizes and spans are measured in characters, not bytes.

use super::Chunk;
use crate::{Error, Result};

/// Splits `text` into chunks of `size` characters starting every
/// `size - overlap` characters. Every chunk has exactly `size` characters
/// except possibly the last; generation stops as soon as a chunk's end
/// reaches the end of the text, so no trailing chunk is fully contained in
/// its predecessor. Empty text yields no chunks.
pub fn chunk_fixed(doc_id: &str, text: &str, size: usize, overlap: usize) -> Result<Vec<Chunk>> {
    if size == 0 {
        return Err(Error::Validation("chunk size must be positive".into()));
    }
    if overlap >= size {
        return Err(Error::Validation(format!(
            "overlap {overlap} must be smaller than size {size}"
        )));
    }

    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let total = chars.len();
    if total == 0 {
        return Ok(Vec::new());
    }

    let byte_at = |char_pos: usize| -> usize {
        if char_pos >= total {
            text.len()
        } else {
            chars[char_pos].0
        }
    };

    let step = size - overlap;
    let mut chunks = Vec::new();
    let mut start = 0usize;
    loop {
        let end = (start + size).min(total);
        chunks.push(Chunk {
            doc_id: doc_id.to_string(),
            seq: chunks.len() as u32,
            text: text[byte_at(start)..byte_at(end)].to_string(),
            span: (start, end),
        });
        if end >= total {
            break;
        }
        start += step;
    }
    Ok(chunks)
}

/// Splits on blank-line boundaries and greedily packs consecutive
/// paragraphs (joined by a single newline) into chunks of at most
/// `max_size` characters. A single paragraph longer than `max_size` falls
/// back to `chunk_fixed(paragraph, max_size, 0)`.
pub fn chunk_paragraphs(doc_id: &str, text: &str, max_size: usize) -> Result<Vec<Chunk>> {
    if max_size == 0 {
        return Err(Error::Validation("max_size must be positive".into()));
    }

    // paragraphs as (start_char, end_char, text)
    let mut paragraphs: Vec<(usize, usize, String)> = Vec::new();
    let mut char_pos = 0usize;
    let mut current: Option<(usize, String)> = None;
    for line in text.split('\n') {
        let line_chars = line.chars().count();
        if line.trim().is_empty() {
            if let Some((start, body)) = current.take() {
                let end = char_pos.saturating_sub(1); // trailing newline excluded
                paragraphs.push((start, end, body));
            }
        } else {
            match &mut current {
                Some((_, body)) => {
                    body.push('\n');
                    body.push_str(line);
                }
                None => current = Some((char_pos, line.to_string())),
            }
        }
        char_pos += line_chars + 1;
    }
    if let Some((start, body)) = current.take() {
        paragraphs.push((start, start + body.chars().count(), body));
    }

    let mut chunks: Vec<Chunk> = Vec::new();
    let mut pack: Option<(usize, usize, String)> = None;

    let flush = |pack: &mut Option<(usize, usize, String)>, chunks: &mut Vec<Chunk>| {
        if let Some((start, end, body)) = pack.take() {
            chunks.push(Chunk {
                doc_id: doc_id.to_string(),
                seq: 0,
                text: body,
                span: (start, end),
            });
        }
    };

    for (start, end, body) in paragraphs {
        let para_len = body.chars().count();
        if para_len > max_size {
            flush(&mut pack, &mut chunks);
            for sub in chunk_fixed(doc_id, &body, max_size, 0)? {
                chunks.push(Chunk {
                    span: (start + sub.span.0, start + sub.span.1),
                    ..sub
                });
            }
            continue;
        }
        match &mut pack {
            Some((_, pack_end, pack_body)) => {
                if pack_body.chars().count() + 1 + para_len <= max_size {
                    pack_body.push('\n');
                    pack_body.push_str(&body);
                    *pack_end = end;
                } else {
                    flush(&mut pack, &mut chunks);
                    pack = Some((start, end, body));
                }
            }
            None => pack = Some((start, end, body)),
        }
    }
    flush(&mut pack, &mut chunks);

    for (i, chunk) in chunks.iter_mut().enumerate() {
        chunk.seq = i as u32;
    }
    Ok(chunks)
}
