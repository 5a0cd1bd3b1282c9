use std::ops::{Add, AddAssign};

use rayon::prelude::*;
use serde::Serialize;

use super::align::align;
use crate::error::{Error, Result};
use crate::text::Token;

/// Substitution, deletion and insertion counts against `ref_len` reference
/// tokens.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ErrorCounts {
    pub sub: usize,
    pub del: usize,
    pub ins: usize,
    pub ref_len: usize,
}

impl ErrorCounts {
    pub fn errors(&self) -> usize {
        self.sub + self.del + self.ins
    }

    /// Error rate in percent; `None` when there are no reference tokens.
    pub fn rate(&self) -> Option<f64> {
        (self.ref_len > 0).then(|| 100.0 * self.errors() as f64 / self.ref_len as f64)
    }
}

impl Add for ErrorCounts {
    type Output = ErrorCounts;

    fn add(self, o: ErrorCounts) -> ErrorCounts {
        ErrorCounts {
            sub: self.sub + o.sub,
            del: self.del + o.del,
            ins: self.ins + o.ins,
            ref_len: self.ref_len + o.ref_len,
        }
    }
}

impl AddAssign for ErrorCounts {
    fn add_assign(&mut self, o: ErrorCounts) {
        *self = *self + o;
    }
}

impl std::iter::Sum for ErrorCounts {
    fn sum<I: Iterator<Item = ErrorCounts>>(iter: I) -> Self {
        iter.fold(ErrorCounts::default(), Add::add)
    }
}

/// Corpus WER: counts are pooled over all `(reference, hypothesis)` pairs
/// before the rate is taken.
pub fn wer<R, H>(pairs: &[(R, H)]) -> Result<ErrorCounts>
where
    R: AsRef<[Token]> + Sync,
    H: AsRef<[Token]> + Sync,
{
    let total: ErrorCounts = pairs
        .par_iter()
        .map(|(r, h)| align(r.as_ref(), h.as_ref()).counts())
        .sum();
    if total.ref_len == 0 {
        return Err(Error::invalid("every reference in the corpus is empty"));
    }
    Ok(total)
}
