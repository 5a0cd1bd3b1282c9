//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use asrbench::decode::{PosteriorMatrix, Vocab};
use asrbench::text::{Token, Transcript};
use rand::Rng;

pub fn toks(s: &str) -> Vec<Token> {
    Transcript::from_text("u", s).tokens
}

pub fn symbols(n: usize) -> Vec<Token> {
    ["a", "b", "c", "d", "e", "f"][..n]
        .iter()
        .map(|s| Token::new(*s).unwrap())
        .collect()
}

pub fn random_seq(rng: &mut impl Rng, alphabet: &[Token], max_len: usize) -> Vec<Token> {
    let n = rng.gen_range(0..=max_len);
    (0..n)
        .map(|_| alphabet[rng.gen_range(0..alphabet.len())].clone())
        .collect()
}

/// Minimum edit cost by exhaustive search over edit scripts, pruned only
/// by the best complete script found so far.
pub fn exhaustive_edit_cost(r: &[Token], h: &[Token]) -> usize {
    fn go(r: &[Token], h: &[Token], cost: usize, best: &mut usize) {
        if cost + r.len().abs_diff(h.len()) >= *best {
            return;
        }
        match (r.split_first(), h.split_first()) {
            (None, None) => *best = cost,
            (Some((a, rr)), Some((b, hh))) => {
                go(rr, hh, cost + usize::from(a != b), best);
                go(rr, h, cost + 1, best);
                go(r, hh, cost + 1, best);
            }
            (Some((_, rr)), None) => go(rr, h, cost + 1, best),
            (None, Some((_, hh))) => go(r, hh, cost + 1, best),
        }
    }
    let mut best = r.len() + h.len() + 1;
    go(r, h, 0, &mut best);
    best
}

/// Random posterior rows (linear probabilities) with a few hard zeros.
pub fn random_probs(rng: &mut impl Rng, frames: usize, v: usize) -> Vec<Vec<f64>> {
    (0..frames)
        .map(|_| {
            let mut row: Vec<f64> = (0..v)
                .map(|_| {
                    if rng.gen_bool(0.1) {
                        0.0
                    } else {
                        rng.gen_range(0.01..1.0)
                    }
                })
                .collect();
            if row.iter().all(|&x| x == 0.0) {
                row[0] = 1.0;
            }
            let z: f64 = row.iter().sum();
            row.iter_mut().for_each(|x| *x /= z);
            row
        })
        .collect()
}

pub fn vocab(v: usize, blank: usize) -> Vocab {
    let syms = (0..v)
        .map(|i| {
            if i == blank {
                "-".to_string()
            } else {
                format!("s{i}")
            }
        })
        .collect();
    Vocab::new(syms, blank).unwrap()
}

/// Probability of every label sequence, by enumerating all `V^T` frame
/// paths and collapsing repeats then blanks.
pub fn ctc_path_sums(probs: &[Vec<f64>], blank: usize) -> HashMap<Vec<usize>, f64> {
    let t = probs.len();
    let v = probs[0].len();
    let mut out = HashMap::new();
    let mut path = vec![0usize; t];
    loop {
        let p: f64 = path.iter().enumerate().map(|(i, &s)| probs[i][s]).product();
        let mut labels = Vec::new();
        let mut prev = None;
        for &s in &path {
            if Some(s) != prev && s != blank {
                labels.push(s);
            }
            prev = Some(s);
        }
        *out.entry(labels).or_insert(0.0) += p;
        let mut i = 0;
        while i < t {
            path[i] += 1;
            if path[i] < v {
                break;
            }
            path[i] = 0;
            i += 1;
        }
        if i == t {
            return out;
        }
    }
}

/// Every sequence over `labels` of length `0..=max_len`.
pub fn all_sequences(labels: &[usize], max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for &l in labels {
                let mut e: Vec<usize> = s.clone();
                e.push(l);
                next.push(e);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn posterior(probs: &[Vec<f64>]) -> PosteriorMatrix {
    PosteriorMatrix::from_probs(probs).unwrap()
}

/// Add-k n-gram probabilities computed straight from corpus counts.
pub struct AddKOracle {
    n: usize,
    k: f64,
    vocab: Vec<String>,
    counts: HashMap<(Vec<String>, String), f64>,
    totals: HashMap<Vec<String>, f64>,
}

const BOS: &str = "<s>";
const EOS: &str = "</s>";

impl AddKOracle {
    pub fn new(corpus: &[Vec<String>], n: usize, k: f64) -> Self {
        let mut vocab: Vec<String> = corpus.iter().flatten().cloned().collect();
        vocab.sort();
        vocab.dedup();
        let mut counts = HashMap::new();
        let mut totals = HashMap::new();
        for sent in corpus {
            let mut seq = vec![BOS.to_string(); n - 1];
            seq.extend(sent.iter().cloned());
            seq.push(EOS.to_string());
            for i in n - 1..seq.len() {
                let ctx = seq[i + 1 - n..i].to_vec();
                *counts.entry((ctx.clone(), seq[i].clone())).or_insert(0.0) += 1.0;
                *totals.entry(ctx).or_insert(0.0) += 1.0;
            }
        }
        AddKOracle {
            n,
            k,
            vocab,
            counts,
            totals,
        }
    }

    fn known(&self, w: &str) -> bool {
        w == EOS || self.vocab.iter().any(|v| v == w)
    }

    pub fn prob(&self, ctx: &[String], w: &str) -> f64 {
        let v = self.vocab.len() as f64;
        let count = |c: &[String], x: &str| {
            if !self.known(x) {
                return 0.0;
            }
            self.counts
                .get(&(c.to_vec(), x.to_string()))
                .copied()
                .unwrap_or(0.0)
        };
        let total = self.totals.get(ctx).copied().unwrap_or(0.0);
        if self.n == 1 {
            let stops = count(ctx, EOS);
            if w == EOS {
                (stops + self.k) / (total + self.k * (v + 1.0))
            } else {
                (count(ctx, w) + self.k) / (total - stops + self.k * v)
            }
        } else {
            (count(ctx, w) + self.k) / (total + self.k * (v + 1.0))
        }
    }

    /// Log-probability of a sentence including its end event. Unknown words
    /// share one context id, as in the model.
    pub fn sentence_log_prob(&self, words: &[String]) -> f64 {
        let unk = "\u{0}unk".to_string();
        let mut ctx = vec![BOS.to_string(); self.n - 1];
        let mut lp = 0.0;
        for w in words.iter().chain(std::iter::once(&EOS.to_string())) {
            lp += self.prob(&ctx, w).ln();
            if self.n > 1 {
                ctx.remove(0);
                ctx.push(if self.known(w) {
                    w.clone()
                } else {
                    unk.clone()
                });
            }
        }
        lp
    }
}
