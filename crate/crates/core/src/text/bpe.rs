//! Byte-pair-encoding subword model, trained and applied within words.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;

use super::Transcript;
use crate::error::{Error, Result};

const HEADER: &str = "bpe v1";

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BpeModel {
    merges: Vec<(String, String)>,
    base_symbols: BTreeSet<char>,
}

impl BpeModel {
    /// Builds a model, checking that every merge part is a base character or
    /// the product of an earlier merge and that no merge repeats.
    pub fn new(merges: Vec<(String, String)>, base_symbols: BTreeSet<char>) -> Result<Self> {
        let mut known: HashSet<String> = base_symbols.iter().map(|c| c.to_string()).collect();
        let mut seen = HashSet::new();
        for (i, (l, r)) in merges.iter().enumerate() {
            for part in [l, r] {
                if !known.contains(part.as_str()) {
                    return Err(Error::invalid(format!(
                        "merge {} uses {part:?}, which is neither a base symbol nor an earlier merge",
                        i + 1
                    )));
                }
            }
            if !seen.insert((l.clone(), r.clone())) {
                return Err(Error::invalid(format!(
                    "merge {} ({l} {r}) is a duplicate",
                    i + 1
                )));
            }
            known.insert(format!("{l}{r}"));
        }
        Ok(BpeModel {
            merges,
            base_symbols,
        })
    }

    pub fn merges(&self) -> &[(String, String)] {
        &self.merges
    }

    pub fn base_symbols(&self) -> &BTreeSet<char> {
        &self.base_symbols
    }

    /// Splits a word into characters and applies every merge in model order.
    pub fn encode(&self, word: &str) -> Vec<String> {
        let mut symbols: Vec<String> = word.chars().map(String::from).collect();
        for (l, r) in &self.merges {
            if symbols.len() < 2 {
                break;
            }
            merge_pair(&mut symbols, l, r);
        }
        symbols
    }

    pub fn decode<S: AsRef<str>>(symbols: &[S]) -> String {
        symbols.iter().map(AsRef::as_ref).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from(HEADER);
        s.push('\n');
        for (l, r) in &self.merges {
            s.push_str(l);
            s.push(' ');
            s.push_str(r);
            s.push('\n');
        }
        s
    }

    /// Parses the model file. Base symbols are recovered from the merges.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(HEADER) {
            return Err(Error::format(origin, 1, format!("header {HEADER:?}")));
        }
        let mut merges = Vec::new();
        let mut base = BTreeSet::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut f = line.split_whitespace();
            let (Some(l), Some(r), None) = (f.next(), f.next(), f.next()) else {
                return Err(Error::format(origin, i + 2, "a merge line `left right`"));
            };
            base.extend(l.chars().chain(r.chars()));
            merges.push((l.to_string(), r.to_string()));
        }
        BpeModel::new(merges, base).map_err(|e| Error::format(origin, 0, e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }
}

fn merge_pair(symbols: &mut Vec<String>, l: &str, r: &str) {
    let mut out = Vec::with_capacity(symbols.len());
    let mut i = 0;
    while i < symbols.len() {
        if i + 1 < symbols.len() && symbols[i] == l && symbols[i + 1] == r {
            out.push(format!("{l}{r}"));
            i += 2;
        } else {
            out.push(std::mem::take(&mut symbols[i]));
            i += 1;
        }
    }
    *symbols = out;
}

/// Learns up to `num_merges` merges. Each round merges the most frequent
/// adjacent pair (smallest pair on ties); training stops early once no pair
/// occurs at least twice.
pub fn bpe_train(corpus: &[Transcript], num_merges: usize) -> BpeModel {
    let mut freqs: BTreeMap<&str, usize> = BTreeMap::new();
    for t in corpus {
        for tok in &t.tokens {
            *freqs.entry(tok.as_str()).or_default() += 1;
        }
    }
    let base: BTreeSet<char> = freqs.keys().flat_map(|w| w.chars()).collect();
    let mut words: Vec<(Vec<String>, usize)> = freqs
        .iter()
        .map(|(w, &n)| (w.chars().map(String::from).collect(), n))
        .collect();

    let mut merges = Vec::new();
    while merges.len() < num_merges {
        let mut pairs: BTreeMap<(&str, &str), usize> = BTreeMap::new();
        for (syms, n) in &words {
            for w in syms.windows(2) {
                *pairs.entry((w[0].as_str(), w[1].as_str())).or_default() += n;
            }
        }
        // BTreeMap iterates pairs in ascending order, so keeping the first
        // maximum gives the lexicographic tie-break.
        let mut best: Option<((&str, &str), usize)> = None;
        for (&pair, &count) in &pairs {
            if best.is_none_or(|(_, c)| count > c) {
                best = Some((pair, count));
            }
        }
        let Some(((l, r), count)) = best else { break };
        if count < 2 {
            break;
        }
        let (l, r) = (l.to_string(), r.to_string());
        for (syms, _) in &mut words {
            merge_pair(syms, &l, &r);
        }
        merges.push((l, r));
    }
    BpeModel {
        merges,
        base_symbols: base,
    }
}
