use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// An incremental sequence scorer over vocabulary ids, used for the decoder
/// and language-model terms of the joint score.
///
/// Scores are log-probabilities; for proper models every increment is <= 0.
pub trait SequenceScorer {
    type State: Clone;

    fn start(&self) -> Self::State;

    /// Log-probability of `symbol` after the sequence in `state`, and the
    /// state after consuming it.
    fn score(&self, state: &Self::State, symbol: usize) -> (f64, Self::State);

    /// Log-probability of ending the sequence in `state`.
    fn finish(&self, state: &Self::State) -> f64;
}

/// Scores every sequence 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct NullScorer;

impl SequenceScorer for NullScorer {
    type State = ();

    fn start(&self) {}

    fn score(&self, _: &(), _: usize) -> (f64, ()) {
        (0.0, ())
    }

    fn finish(&self, _: &()) -> f64 {
        0.0
    }
}

/// First-order table scorer. Row 0 is the start context and row `i + 1` the
/// context after symbol `i`; column `j < V` is symbol `j` and column `V` is
/// the end of the sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovTable {
    vocab_size: usize,
    logp: Vec<Vec<f64>>,
}

impl MarkovTable {
    pub fn new(vocab_size: usize, logp: Vec<Vec<f64>>) -> Result<Self> {
        if logp.len() != vocab_size + 1 || logp.iter().any(|r| r.len() != vocab_size + 1) {
            return Err(Error::Dimension(format!(
                "a Markov table over {vocab_size} symbols is {0}x{0}",
                vocab_size + 1
            )));
        }
        if logp.iter().flatten().any(|v| v.is_nan() || *v > 0.0) {
            return Err(Error::invalid(
                "Markov table entries must be log-probabilities",
            ));
        }
        Ok(MarkovTable { vocab_size, logp })
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    /// Text form: `markov v1 V`, then `V + 1` rows of `V + 1` values.
    pub fn to_text(&self) -> String {
        let mut s = format!("markov v1 {}\n", self.vocab_size);
        for row in &self.logp {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            let _ = writeln!(s, "{}", cells.join(" "));
        }
        s
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let header = "header `markov v1 <V>`";
        let (_, first) = lines
            .next()
            .ok_or_else(|| Error::format(origin, 1, header))?;
        let v: usize = match first.split_whitespace().collect::<Vec<_>>()[..] {
            ["markov", "v1", v] => v.parse().map_err(|_| Error::format(origin, 1, header))?,
            _ => return Err(Error::format(origin, 1, header)),
        };
        let mut rows = Vec::with_capacity(v + 1);
        for (i, line) in lines {
            let row: Option<Vec<f64>> = line.split_whitespace().map(|c| c.parse().ok()).collect();
            match row {
                Some(r) if r.len() == v + 1 => rows.push(r),
                _ => {
                    return Err(Error::format(
                        origin,
                        i + 1,
                        format!("{} log-probabilities", v + 1),
                    ))
                }
            }
        }
        if rows.len() != v + 1 {
            return Err(Error::format(
                origin,
                text.lines().count(),
                format!("{} rows", v + 1),
            ));
        }
        MarkovTable::new(v, rows)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }
}

impl SequenceScorer for MarkovTable {
    type State = usize;

    fn start(&self) -> usize {
        0
    }

    fn score(&self, state: &usize, symbol: usize) -> (f64, usize) {
        (self.logp[*state][symbol], symbol + 1)
    }

    fn finish(&self, state: &usize) -> f64 {
        self.logp[*state][self.vocab_size]
    }
}
