//! Overlapping fixed-size windows over long token sequences.

use crate::error::{Error, Result};

pub const DEFAULT_MAX_LEN: usize = 200;
pub const DEFAULT_OVERLAP: usize = 50;

/// Splits `tokens` into windows of at most `max_len` items; window `i`
/// starts at `i * (max_len - overlap)` and the last window ends at the end
/// of the input. Empty input gives no windows.
pub fn chunk_text<T>(tokens: &[T], max_len: usize, overlap: usize) -> Result<Vec<&[T]>> {
    if overlap >= max_len {
        return Err(Error::invalid(format!(
            "chunk overlap ({overlap}) must be smaller than the maximum length ({max_len})"
        )));
    }
    let stride = max_len - overlap;
    let n = tokens.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let count = if n <= max_len {
        1
    } else {
        (n - max_len).div_ceil(stride) + 1
    };
    Ok((0..count)
        .map(|i| {
            let start = i * stride;
            &tokens[start..(start + max_len).min(n)]
        })
        .collect())
}
