//! Add-k smoothed n-gram language model.
//!
//! For order `n >= 2`, `P(w | ctx) = (c(ctx, w) + k) / (c(ctx) + k * (|V| + 1))`
//! where the event space is the vocabulary plus the end symbol.
//!
//! For unigrams the word distribution is normalized over the vocabulary
//! alone, `P(w) = (c(w) + k) / (N + k * |V|)`, and the end symbol is a
//! separate stop event with `P(end) = (U + k) / (N + U + k * (|V| + 1))`,
//! `N` being the number of word tokens and `U` the number of utterances.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use super::posterior::Vocab;
use super::scorer::SequenceScorer;
use crate::error::{Error, Result};
use crate::text::Transcript;

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";

const BOS_ID: u32 = 0;
const EOS_ID: u32 = 1;
const UNK_ID: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct NgramLm {
    order: usize,
    k: f64,
    words: Vec<String>,
    ids: HashMap<String, u32>,
    counts: HashMap<Vec<u32>, HashMap<u32, u64>>,
    totals: HashMap<Vec<u32>, u64>,
}

impl NgramLm {
    fn empty(order: usize, k: f64, mut vocab: Vec<String>) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("n-gram order must be at least 1"));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::invalid(format!(
                "smoothing constant must be positive, got {k}"
            )));
        }
        vocab.sort();
        vocab.dedup();
        vocab.retain(|w| w != BOS && w != EOS);
        if vocab.is_empty() {
            return Err(Error::invalid("language model vocabulary is empty"));
        }
        let mut words = vec![BOS.to_string(), EOS.to_string()];
        words.extend(vocab);
        let ids = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        Ok(NgramLm {
            order,
            k,
            words,
            ids,
            counts: HashMap::new(),
            totals: HashMap::new(),
        })
    }

    fn add_count(&mut self, ctx: Vec<u32>, sym: u32, n: u64) {
        *self.totals.entry(ctx.clone()).or_default() += n;
        *self.counts.entry(ctx).or_default().entry(sym).or_default() += n;
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Vocabulary size, excluding the begin and end symbols.
    pub fn vocab_size(&self) -> usize {
        self.words.len() - 2
    }

    pub fn vocab(&self) -> impl Iterator<Item = &str> {
        self.words[2..].iter().map(String::as_str)
    }

    fn id(&self, word: &str) -> u32 {
        self.ids.get(word).copied().unwrap_or(UNK_ID)
    }

    fn count(&self, ctx: &[u32], sym: u32) -> u64 {
        self.counts
            .get(ctx)
            .and_then(|m| m.get(&sym))
            .copied()
            .unwrap_or(0)
    }

    fn prob_ids(&self, ctx: &[u32], sym: u32) -> f64 {
        let v = self.vocab_size() as f64;
        let k = self.k;
        let total = self.totals.get(ctx).copied().unwrap_or(0) as f64;
        let c = self.count(ctx, sym) as f64;
        if self.order == 1 {
            let stops = self.count(ctx, EOS_ID) as f64;
            let tokens = total - stops;
            if sym == EOS_ID {
                (stops + k) / (tokens + stops + k * (v + 1.0))
            } else {
                (c + k) / (tokens + k * v)
            }
        } else {
            (c + k) / (total + k * (v + 1.0))
        }
    }

    fn start_context(&self) -> Vec<u32> {
        vec![BOS_ID; self.order - 1]
    }

    fn push_context(&self, ctx: &[u32], sym: u32) -> Vec<u32> {
        if self.order == 1 {
            return Vec::new();
        }
        let mut next = ctx[1..].to_vec();
        next.push(sym);
        next
    }

    /// `P(word | context)`; the context is the preceding words, left-padded
    /// with the begin symbol as needed. Use [`EOS`] for the end event.
    pub fn prob(&self, context: &[&str], word: &str) -> f64 {
        let mut ctx = self.start_context();
        for w in context {
            ctx = self.push_context(&ctx, self.id(w));
        }
        self.prob_ids(&ctx, self.id(word))
    }

    /// Log-probability of a whole utterance, including its end event.
    pub fn sentence_log_prob<S: AsRef<str>>(&self, words: &[S]) -> f64 {
        let mut ctx = self.start_context();
        let mut lp = 0.0;
        for w in words {
            let id = self.id(w.as_ref());
            lp += self.prob_ids(&ctx, id).ln();
            ctx = self.push_context(&ctx, id);
        }
        lp + self.prob_ids(&ctx, EOS_ID).ln()
    }

    /// Binds the model to a CTC vocabulary for use during decoding.
    pub fn scorer<'a>(&'a self, vocab: &Vocab) -> NgramScorer<'a> {
        NgramScorer {
            lm: self,
            map: vocab.symbols().iter().map(|s| self.id(s)).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("ngram v1 {} {}\n", self.order, self.k);
        let mut lines = BTreeMap::new();
        for (ctx, syms) in &self.counts {
            let ctx_words: Vec<&str> = ctx
                .iter()
                .map(|&i| self.words[i as usize].as_str())
                .collect();
            for (&sym, &c) in syms {
                lines.insert((ctx_words.clone(), self.words[sym as usize].as_str()), c);
            }
        }
        for ((ctx, sym), c) in lines {
            for w in ctx {
                s.push_str(w);
                s.push(' ');
            }
            let _ = writeln!(s, "| {sym} {c}");
        }
        s
    }

    /// Parses `ngram v1 n k` followed by `<context words> | <symbol> <count>`
    /// lines, where the context has exactly `n - 1` words.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let header_expect = "header `ngram v1 n k`";
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::format(origin, 1, header_expect))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 || h[0] != "ngram" || h[1] != "v1" {
            return Err(Error::format(origin, 1, header_expect));
        }
        let order: usize = h[2]
            .parse()
            .map_err(|_| Error::format(origin, 1, header_expect))?;
        let k: f64 = h[3]
            .parse()
            .map_err(|_| Error::format(origin, 1, header_expect))?;
        if order == 0 {
            return Err(Error::format(origin, 1, "an order of at least 1"));
        }

        let mut entries = Vec::new();
        let mut vocab = Vec::new();
        for (i, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            let expect = || {
                Error::format(
                    origin,
                    i + 1,
                    format!("{} context words, `|`, a symbol and a count", order - 1),
                )
            };
            if f.len() != order + 2 || f[order - 1] != "|" {
                return Err(expect());
            }
            let count: u64 = f[order + 1].parse().map_err(|_| expect())?;
            let ctx: Vec<String> = f[..order - 1].iter().map(|s| s.to_string()).collect();
            let sym = f[order].to_string();
            vocab.extend(ctx.iter().cloned());
            vocab.push(sym.clone());
            entries.push((ctx, sym, count));
        }
        let mut lm =
            NgramLm::empty(order, k, vocab).map_err(|e| Error::format(origin, 1, e.to_string()))?;
        for (ctx, sym, count) in entries {
            let ctx = ctx.iter().map(|w| lm.id(w)).collect();
            let sym = lm.id(&sym);
            lm.add_count(ctx, sym, count);
        }
        Ok(lm)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }
}

/// Counts every n-gram of the corpus with begin padding and one end event
/// per utterance.
pub fn lm_train(corpus: &[Transcript], order: usize, k: f64) -> Result<NgramLm> {
    if corpus.is_empty() {
        return Err(Error::invalid(
            "cannot train a language model on an empty corpus",
        ));
    }
    let vocab = corpus
        .iter()
        .flat_map(|t| t.tokens.iter().map(|w| w.to_string()))
        .collect();
    let mut lm = NgramLm::empty(order, k, vocab)?;
    for t in corpus {
        let mut seq = lm.start_context();
        seq.extend(t.tokens.iter().map(|w| lm.id(w)));
        seq.push(EOS_ID);
        for i in (order - 1)..seq.len() {
            lm.add_count(seq[i + 1 - order..i].to_vec(), seq[i], 1);
        }
    }
    Ok(lm)
}

/// `exp(-(1/M) * sum log P)` over all tokens plus one end event per
/// utterance.
pub fn perplexity(lm: &NgramLm, text: &[Transcript]) -> Result<f64> {
    if text.is_empty() {
        return Err(Error::invalid("perplexity needs at least one utterance"));
    }
    let mut events = 0usize;
    let mut lp = 0.0;
    for t in text {
        events += t.tokens.len() + 1;
        lp += lm.sentence_log_prob(&t.tokens);
    }
    Ok((-lp / events as f64).exp())
}

/// An [`NgramLm`] viewed through a CTC vocabulary.
#[derive(Debug, Clone)]
pub struct NgramScorer<'a> {
    lm: &'a NgramLm,
    map: Vec<u32>,
}

impl SequenceScorer for NgramScorer<'_> {
    type State = Vec<u32>;

    fn start(&self) -> Vec<u32> {
        self.lm.start_context()
    }

    fn score(&self, state: &Vec<u32>, symbol: usize) -> (f64, Vec<u32>) {
        let id = self.map[symbol];
        (
            self.lm.prob_ids(state, id).ln(),
            self.lm.push_context(state, id),
        )
    }

    fn finish(&self, state: &Vec<u32>) -> f64 {
        self.lm.prob_ids(state, EOS_ID).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(lines: &[&str]) -> Vec<Transcript> {
        lines
            .iter()
            .enumerate()
            .map(|(i, l)| Transcript::from_text(format!("u{i}"), l))
            .collect()
    }

    #[test]
    fn unigram_example() {
        let lm = lm_train(&corpus(&["a a b"]), 1, 1.0).unwrap();
        assert!((lm.prob(&[], "a") - 0.6).abs() < 1e-12);
        assert!((lm.prob(&[], "b") - 0.4).abs() < 1e-12);
        // one stop event over three tokens: (1 + 1) / (3 + 1 + 3)
        assert!((lm.prob(&[], EOS) - 2.0 / 7.0).abs() < 1e-12);
        assert!((lm.prob(&[], "zzz") - 0.2).abs() < 1e-12);
        let ppl = perplexity(&lm, &corpus(&["a"])).unwrap();
        let expect = (-(0.6f64.ln() + (2.0f64 / 7.0).ln()) / 2.0).exp();
        assert!((ppl - expect).abs() < 1e-12);
    }

    #[test]
    fn bigram_normalizes_over_vocab_and_end() {
        let lm = lm_train(&corpus(&["a b a", "b b"]), 2, 0.5).unwrap();
        for ctx in [BOS, "a", "b", "unseen"] {
            let ctx: &[&str] = if ctx == BOS { &[] } else { &[ctx] };
            let total: f64 = ["a", "b", EOS].iter().map(|w| lm.prob(ctx, w)).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
        // c(<s> a) = 1, c(<s>) = 2, |V| + 1 = 3
        assert!((lm.prob(&[], "a") - 1.5 / 3.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(lm_train(&[], 2, 1.0).is_err());
        assert!(lm_train(&corpus(&["a"]), 0, 1.0).is_err());
        assert!(lm_train(&corpus(&["a"]), 2, 0.0).is_err());
        assert!(lm_train(&corpus(&["", ""]), 1, 1.0).is_err());
        assert!(NgramLm::parse("ngram v1 1 1\n| </s> 2\n", "lm").is_err());
        let lm = lm_train(&corpus(&["a"]), 2, 1.0).unwrap();
        assert!(perplexity(&lm, &[]).is_err());
    }

    #[test]
    fn file_round_trip() {
        for order in 1..=3 {
            let lm = lm_train(&corpus(&["$y' b", "b |lp b"]), order, 0.25).unwrap();
            let text = lm.to_text();
            let back = NgramLm::parse(&text, "mem").unwrap();
            assert_eq!(back.to_text(), text);
            assert_eq!(back.prob(&["b"], "|lp"), lm.prob(&["b"], "|lp"));
        }
    }

    #[test]
    fn unigram_file_format() {
        let lm = lm_train(&corpus(&["a a b"]), 1, 1.0).unwrap();
        assert_eq!(lm.to_text(), "ngram v1 1 1\n| </s> 1\n| a 2\n| b 1\n");
        assert!(NgramLm::parse("ngram v1 2 1\na b 3\n", "lm").is_err());
    }

    #[test]
    fn scorer_matches_sentence_probability() {
        let lm = lm_train(&corpus(&["a b a", "b b"]), 3, 0.1).unwrap();
        let vocab = Vocab::new(vec!["<b>".into(), "a".into(), "b".into(), "c".into()], 0).unwrap();
        let sc = lm.scorer(&vocab);
        let mut st = sc.start();
        let mut total = 0.0;
        for sym in [2, 1, 3] {
            let (lp, next) = sc.score(&st, sym);
            total += lp;
            st = next;
        }
        total += sc.finish(&st);
        assert!((total - lm.sentence_log_prob(&["b", "a", "c"])).abs() < 1e-12);
    }
}
