//! Label-synchronous joint beam search.
//!
//! Every live prefix is scored by
//! `lambda * ctc_prefix + (1 - lambda) * dec + mu * lm`, where `ctc_prefix`
//! is the probability that the CTC output starts with the prefix. At each
//! step each live prefix is completed (end of sequence, scored with its full
//! CTC probability) and extended by every non-blank symbol; the best `beam`
//! extensions survive.

use std::cmp::Ordering;

use serde::Serialize;

use super::ctc::{CtcPrefixScorer, CtcPrefixState};
use super::posterior::{PosteriorMatrix, Vocab};
use super::scorer::SequenceScorer;
use crate::error::{Error, Result};
use crate::kernels::{combine_scores, CombineConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamConfig {
    pub beam: usize,
    pub max_len: usize,
    pub weights: CombineConfig,
    /// Rank completed hypotheses by `joint / (len + 1)` instead of `joint`.
    pub length_norm: bool,
}

impl BeamConfig {
    pub fn new(beam: usize, max_len: usize, weights: CombineConfig) -> Self {
        BeamConfig {
            beam,
            max_len,
            weights,
            length_norm: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hypothesis {
    pub tokens: Vec<usize>,
    pub joint: f64,
    pub ctc: f64,
    pub dec: f64,
    pub lm: f64,
}

impl Hypothesis {
    fn rank_score(&self, length_norm: bool) -> f64 {
        if length_norm {
            self.joint / (self.tokens.len() + 1) as f64
        } else {
            self.joint
        }
    }
}

struct Prefix<DS, LS> {
    tokens: Vec<usize>,
    ctc_state: CtcPrefixState,
    dec_state: DS,
    dec: f64,
    lm_state: LS,
    lm: f64,
    joint: f64,
}

/// Descending score, then ascending token sequence.
fn rank(a_score: f64, a_tokens: &[usize], b_score: f64, b_tokens: &[usize]) -> Ordering {
    b_score
        .total_cmp(&a_score)
        .then_with(|| a_tokens.cmp(b_tokens))
}

/// Returns up to `cfg.beam` completed hypotheses, best first. Hypotheses
/// with a joint score of `-inf` are dropped. Without a decoder scorer the
/// CTC weight is 1.
pub fn joint_beam_search<D, L>(
    post: &PosteriorMatrix,
    vocab: &Vocab,
    cfg: &BeamConfig,
    dec: Option<&D>,
    lm: Option<&L>,
) -> Result<Vec<Hypothesis>>
where
    D: SequenceScorer,
    L: SequenceScorer,
{
    if cfg.beam == 0 {
        return Err(Error::invalid("beam size must be at least 1"));
    }
    cfg.weights.validate()?;
    let mut weights = cfg.weights;
    if dec.is_none() {
        weights.lambda = 1.0;
    }
    let ctc = CtcPrefixScorer::new(post, vocab)?;
    let labels: Vec<usize> = vocab.labels().collect();

    let mut live = vec![Prefix {
        tokens: Vec::new(),
        ctc_state: ctc.start(),
        dec_state: dec.map(SequenceScorer::start),
        dec: 0.0,
        lm_state: lm.map(SequenceScorer::start),
        lm: 0.0,
        joint: 0.0,
    }];
    let mut ended: Vec<Hypothesis> = Vec::new();

    for step in 0..=cfg.max_len {
        let mut next = Vec::new();
        for p in &live {
            let ctc_full = ctc.complete(&p.ctc_state);
            let dec_total = p.dec
                + dec
                    .zip(p.dec_state.as_ref())
                    .map_or(0.0, |(d, s)| d.finish(s));
            let lm_total = p.lm
                + lm.zip(p.lm_state.as_ref())
                    .map_or(0.0, |(l, s)| l.finish(s));
            let joint = combine_scores(ctc_full, dec_total, lm_total, &weights);
            if joint > f64::NEG_INFINITY {
                ended.push(Hypothesis {
                    tokens: p.tokens.clone(),
                    joint,
                    ctc: ctc_full,
                    dec: dec_total,
                    lm: lm_total,
                });
            }
            if step == cfg.max_len {
                continue;
            }
            for &c in &labels {
                let (ctc_score, ctc_state) = ctc.extend(&p.ctc_state, c);
                let (dec_inc, dec_state) = match (dec, p.dec_state.as_ref()) {
                    (Some(d), Some(s)) => {
                        let (v, s) = d.score(s, c);
                        (v, Some(s))
                    }
                    _ => (0.0, None),
                };
                let (lm_inc, lm_state) = match (lm, p.lm_state.as_ref()) {
                    (Some(l), Some(s)) => {
                        let (v, s) = l.score(s, c);
                        (v, Some(s))
                    }
                    _ => (0.0, None),
                };
                let dec_score = p.dec + dec_inc;
                let lm_score = p.lm + lm_inc;
                let joint = combine_scores(ctc_score, dec_score, lm_score, &weights);
                if joint == f64::NEG_INFINITY || joint.is_nan() {
                    continue;
                }
                let mut tokens = p.tokens.clone();
                tokens.push(c);
                next.push(Prefix {
                    tokens,
                    ctc_state,
                    dec_state,
                    dec: dec_score,
                    lm_state,
                    lm: lm_score,
                    joint,
                });
            }
        }
        next.sort_by(|a, b| rank(a.joint, &a.tokens, b.joint, &b.tokens));
        next.truncate(cfg.beam);
        if next.is_empty() {
            break;
        }
        live = next;
    }
    ended.sort_by(|a, b| {
        rank(
            a.rank_score(cfg.length_norm),
            &a.tokens,
            b.rank_score(cfg.length_norm),
            &b.tokens,
        )
    });
    ended.truncate(cfg.beam);
    Ok(ended)
}

#[derive(Serialize)]
struct NbestEntry {
    tokens: Vec<String>,
    joint: f64,
    ctc: f64,
    dec: f64,
    lm: f64,
}

/// JSON list of `{tokens, joint, ctc, dec, lm}`.
pub fn nbest_json(hyps: &[Hypothesis], vocab: &Vocab) -> serde_json::Value {
    let entries: Vec<NbestEntry> = hyps
        .iter()
        .map(|h| NbestEntry {
            tokens: vocab.render(&h.tokens),
            joint: h.joint,
            ctc: h.ctc,
            dec: h.dec,
            lm: h.lm,
        })
        .collect();
    serde_json::to_value(entries).expect("n-best entries serialize")
}
