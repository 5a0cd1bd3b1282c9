//! Multi-reference scoring through a confusion network built from all
//! references of an utterance.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::wer::{wer, ErrorCounts};
use crate::error::{Error, Result};
use crate::text::Token;

/// One alternative of a slot. `Eps` (the empty word) sorts first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Alternative {
    Eps,
    Word(Token),
}

impl Alternative {
    fn word(&self) -> Option<&Token> {
        match self {
            Alternative::Eps => None,
            Alternative::Word(t) => Some(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ConfusionNetwork {
    pub slots: Vec<BTreeSet<Alternative>>,
}

impl ConfusionNetwork {
    pub fn from_reference(tokens: &[Token]) -> Self {
        ConfusionNetwork {
            slots: tokens
                .iter()
                .map(|t| BTreeSet::from([Alternative::Word(t.clone())]))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    fn has_word(&self, slot: usize, tok: &Token) -> bool {
        self.slots[slot].contains(&Alternative::Word(tok.clone()))
    }

    fn has_eps(&self, slot: usize) -> bool {
        self.slots[slot].contains(&Alternative::Eps)
    }

    fn first_word(&self, slot: usize) -> Option<&Token> {
        self.slots[slot].iter().find_map(Alternative::word)
    }

    /// Aligns `tokens` to the network and adds them as alternatives.
    pub fn add_reference(&mut self, tokens: &[Token]) {
        let (s, m) = (self.slots.len(), tokens.len());
        let w = m + 1;
        let mut d = vec![0u32; (s + 1) * w];
        for (j, cell) in d[..w].iter_mut().enumerate() {
            *cell = j as u32;
        }
        for i in 1..=s {
            let skip = u32::from(!self.has_eps(i - 1));
            d[i * w] = d[(i - 1) * w] + skip;
            for j in 1..=m {
                let diag =
                    d[(i - 1) * w + j - 1] + u32::from(!self.has_word(i - 1, &tokens[j - 1]));
                let up = d[(i - 1) * w + j] + skip;
                let left = d[i * w + j - 1] + 1;
                d[i * w + j] = diag.min(up).min(left);
            }
        }

        // Backtrace with Correct > Sub > Del > Ins, collecting new slots in
        // reverse order.
        let mut slots = Vec::with_capacity(s.max(m));
        let (mut i, mut j) = (s, m);
        while i > 0 || j > 0 {
            let here = d[i * w + j];
            if i > 0 && j > 0 {
                let tok = &tokens[j - 1];
                let matched = self.has_word(i - 1, tok);
                if here == d[(i - 1) * w + j - 1] + u32::from(!matched) {
                    let mut slot = std::mem::take(&mut self.slots[i - 1]);
                    slot.insert(Alternative::Word(tok.clone()));
                    slots.push(slot);
                    i -= 1;
                    j -= 1;
                    continue;
                }
            }
            if i > 0 && here == d[(i - 1) * w + j] + u32::from(!self.has_eps(i - 1)) {
                let mut slot = std::mem::take(&mut self.slots[i - 1]);
                slot.insert(Alternative::Eps);
                slots.push(slot);
                i -= 1;
            } else {
                slots.push(BTreeSet::from([
                    Alternative::Eps,
                    Alternative::Word(tokens[j - 1].clone()),
                ]));
                j -= 1;
            }
        }
        slots.reverse();
        self.slots = slots;
    }

    /// Minimal edit cost of `hyp` against any path through the network.
    /// Epsilon slots are skipped for free. Among minimal-cost paths the one
    /// with the most reference tokens is taken; `ref_len` is its length.
    pub fn score(&self, hyp: &[Token]) -> ErrorCounts {
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
        struct Cost {
            errors: u32,
            neg_len: i32,
        }
        impl Cost {
            fn step(self, errors: u32, len: i32) -> Cost {
                Cost {
                    errors: self.errors + errors,
                    neg_len: self.neg_len - len,
                }
            }
        }

        let (s, m) = (self.slots.len(), hyp.len());
        let w = m + 1;
        let zero = Cost {
            errors: 0,
            neg_len: 0,
        };
        let mut d = vec![zero; (s + 1) * w];
        let skip_cost = |i: usize| -> (u32, i32) {
            if self.has_eps(i) {
                (0, 0)
            } else {
                (1, 1)
            }
        };
        for j in 1..=m {
            d[j] = d[j - 1].step(1, 0);
        }
        for i in 1..=s {
            let (se, sl) = skip_cost(i - 1);
            d[i * w] = d[(i - 1) * w].step(se, sl);
            for j in 1..=m {
                let diag =
                    d[(i - 1) * w + j - 1].step(u32::from(!self.has_word(i - 1, &hyp[j - 1])), 1);
                let up = d[(i - 1) * w + j].step(se, sl);
                let left = d[i * w + j - 1].step(1, 0);
                d[i * w + j] = diag.min(up).min(left);
            }
        }

        let mut counts = ErrorCounts::default();
        let (mut i, mut j) = (s, m);
        while i > 0 || j > 0 {
            let here = d[i * w + j];
            if i > 0 && j > 0 {
                let matched = self.has_word(i - 1, &hyp[j - 1]);
                if here == d[(i - 1) * w + j - 1].step(u32::from(!matched), 1) {
                    counts.ref_len += 1;
                    counts.sub += usize::from(!matched);
                    i -= 1;
                    j -= 1;
                    continue;
                }
            }
            if i > 0 {
                let (se, sl) = skip_cost(i - 1);
                if here == d[(i - 1) * w + j].step(se, sl) {
                    counts.del += se as usize;
                    counts.ref_len += sl as usize;
                    i -= 1;
                    continue;
                }
            }
            counts.ins += 1;
            j -= 1;
        }
        debug_assert_eq!(counts.errors() as u32, d[s * w + m].errors);
        counts
    }

    /// Representative reference word for slot `i`, if it has one.
    pub fn slot_word(&self, i: usize) -> Option<&Token> {
        self.first_word(i)
    }
}

/// Seeds the network with the first reference and folds in the rest.
pub fn build_confusion_network<R: AsRef<[Token]>>(refs: &[R]) -> Result<ConfusionNetwork> {
    let (first, rest) = refs
        .split_first()
        .ok_or_else(|| Error::invalid("a confusion network needs at least one reference"))?;
    let mut net = ConfusionNetwork::from_reference(first.as_ref());
    for r in rest {
        net.add_reference(r.as_ref());
    }
    Ok(net)
}

/// Multi-reference WER, pooled over utterances.
pub fn mr_wer<R, H>(ref_sets: &[Vec<R>], hyps: &[H]) -> Result<ErrorCounts>
where
    R: AsRef<[Token]> + Sync,
    H: AsRef<[Token]> + Sync,
{
    if ref_sets.len() != hyps.len() {
        return Err(Error::invalid(format!(
            "{} reference sets but {} hypotheses",
            ref_sets.len(),
            hyps.len()
        )));
    }
    if let Some(u) = ref_sets.iter().position(Vec::is_empty) {
        return Err(Error::invalid(format!("utterance {u} has no reference")));
    }
    let total: ErrorCounts = ref_sets
        .par_iter()
        .zip(hyps.par_iter())
        .map(|(refs, hyp)| Ok(build_confusion_network(refs)?.score(hyp.as_ref())))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    if total.ref_len == 0 {
        return Err(Error::invalid("every reference in the corpus is empty"));
    }
    Ok(total)
}

/// Mean over annotators `k` of the pooled WER of the hypotheses against the
/// k-th reference of every utterance, in percent.
pub fn av_wer<R, H>(ref_sets: &[Vec<R>], hyps: &[H]) -> Result<f64>
where
    R: AsRef<[Token]> + Sync,
    H: AsRef<[Token]> + Sync,
{
    if ref_sets.len() != hyps.len() {
        return Err(Error::invalid(format!(
            "{} reference sets but {} hypotheses",
            ref_sets.len(),
            hyps.len()
        )));
    }
    let k = ref_sets.first().map_or(0, Vec::len);
    if k == 0 {
        return Err(Error::invalid("no references"));
    }
    if let Some(u) = ref_sets.iter().position(|r| r.len() != k) {
        return Err(Error::invalid(format!(
            "utterance {u} has {} references, expected {k}",
            ref_sets[u].len()
        )));
    }
    let mut sum = 0.0;
    for a in 0..k {
        let pairs: Vec<(&[Token], &[Token])> = ref_sets
            .iter()
            .zip(hyps)
            .map(|(refs, h)| (refs[a].as_ref(), h.as_ref()))
            .collect();
        sum += wer(&pairs)?.rate().unwrap_or_default();
    }
    Ok(sum / k as f64)
}
