use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use super::ctc::log_add;
use crate::error::{Error, Result};

const HEADER: &str = "ctcpost";
const VERSION: &str = "v1";

/// CTC label alphabet with a designated blank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocab {
    symbols: Vec<String>,
    blank_id: usize,
}

impl Vocab {
    pub fn new(symbols: Vec<String>, blank_id: usize) -> Result<Self> {
        if blank_id >= symbols.len() {
            return Err(Error::invalid(format!(
                "blank id {blank_id} outside a vocabulary of {} symbols",
                symbols.len()
            )));
        }
        let mut seen = HashSet::new();
        for s in &symbols {
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(Error::InvalidToken(s.clone()));
            }
            if !seen.insert(s.as_str()) {
                return Err(Error::invalid(format!("duplicate vocabulary symbol {s:?}")));
            }
        }
        Ok(Vocab { symbols, blank_id })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn blank_id(&self) -> usize {
        self.blank_id
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, id: usize) -> &str {
        &self.symbols[id]
    }

    pub fn id(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    /// Non-blank symbol ids in ascending order.
    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.symbols.len()).filter(move |&i| i != self.blank_id)
    }

    pub fn render(&self, ids: &[usize]) -> Vec<String> {
        ids.iter().map(|&i| self.symbols[i].clone()).collect()
    }
}

/// Per-frame log-probabilities, `frames x vocab_size`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorMatrix {
    frames: usize,
    vocab_size: usize,
    logp: Vec<f64>,
}

/// Maximum allowed deviation of a row's log-sum-exp from zero.
pub const ROW_TOLERANCE: f64 = 1e-6;

fn check_row(row: &[f64]) -> std::result::Result<(), String> {
    if row.iter().any(|v| v.is_nan() || *v > 0.0) {
        return Err("log-probabilities must be <= 0".into());
    }
    let total = row.iter().copied().fold(f64::NEG_INFINITY, log_add);
    if total.abs() > ROW_TOLERANCE {
        return Err(format!("probabilities sum to exp({total}), not 1"));
    }
    Ok(())
}

impl PosteriorMatrix {
    pub fn new(frames: usize, vocab_size: usize, logp: Vec<f64>) -> Result<Self> {
        if frames == 0 || vocab_size == 0 {
            return Err(Error::Dimension(
                "posterior matrix needs at least one frame and symbol".into(),
            ));
        }
        if logp.len() != frames * vocab_size {
            return Err(Error::Dimension(format!(
                "{frames}x{vocab_size} posteriors need {} values, got {}",
                frames * vocab_size,
                logp.len()
            )));
        }
        for (t, row) in logp.chunks(vocab_size).enumerate() {
            check_row(row).map_err(|m| Error::invalid(format!("frame {t}: {m}")))?;
        }
        Ok(PosteriorMatrix {
            frames,
            vocab_size,
            logp,
        })
    }

    /// Builds a matrix from linear probabilities.
    pub fn from_probs(rows: &[Vec<f64>]) -> Result<Self> {
        let v = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != v) {
            return Err(Error::Dimension("posterior rows differ in length".into()));
        }
        let logp = rows.iter().flatten().map(|p| p.ln()).collect();
        PosteriorMatrix::new(rows.len(), v, logp)
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn get(&self, t: usize, v: usize) -> f64 {
        self.logp[t * self.vocab_size + v]
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.logp[t * self.vocab_size..(t + 1) * self.vocab_size]
    }

    /// Parses `ctcpost v1 T V blank_id`, a symbol line, then `T` rows of `V`
    /// log-probabilities (`-inf` allowed).
    pub fn parse(text: &str, origin: &str) -> Result<(Self, Vocab)> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let header_expect = "header `ctcpost v1 T V blank_id`";
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::format(origin, 1, header_expect))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 5 || h[0] != HEADER || h[1] != VERSION {
            return Err(Error::format(origin, 1, header_expect));
        }
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::format(origin, 1, header_expect))
        };
        let (frames, vsize, blank) = (num(h[2])?, num(h[3])?, num(h[4])?);

        let (i, sym_line) = lines
            .next()
            .ok_or_else(|| Error::format(origin, 2, format!("a line of {vsize} symbols")))?;
        let symbols: Vec<String> = sym_line.split_whitespace().map(String::from).collect();
        if symbols.len() != vsize {
            return Err(Error::format(
                origin,
                i + 1,
                format!("{vsize} symbols, found {}", symbols.len()),
            ));
        }
        let vocab =
            Vocab::new(symbols, blank).map_err(|e| Error::format(origin, i + 1, e.to_string()))?;

        let mut logp = Vec::with_capacity(frames * vsize);
        let mut rows = 0;
        for (i, line) in lines {
            let before = logp.len();
            for f in line.split_whitespace() {
                let v: f64 = f.parse().map_err(|_| {
                    Error::format(
                        origin,
                        i + 1,
                        format!("a decimal log-probability, found {f:?}"),
                    )
                })?;
                logp.push(v);
            }
            if logp.len() - before != vsize {
                return Err(Error::format(
                    origin,
                    i + 1,
                    format!("{vsize} values per frame"),
                ));
            }
            if let Err(m) = check_row(&logp[before..]) {
                return Err(Error::format(
                    origin,
                    i + 1,
                    format!("a normalized log-probability row ({m})"),
                ));
            }
            rows += 1;
        }
        if rows != frames {
            return Err(Error::format(
                origin,
                text.lines().count(),
                format!("{frames} frames, found {rows}"),
            ));
        }
        let post = PosteriorMatrix::new(frames, vsize, logp)?;
        Ok((post, vocab))
    }

    pub fn read(path: &Path) -> Result<(Self, Vocab)> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_text(&self, vocab: &Vocab) -> String {
        let mut s = format!(
            "{HEADER} {VERSION} {} {} {}\n{}\n",
            self.frames,
            self.vocab_size,
            vocab.blank_id(),
            vocab.symbols().join(" ")
        );
        for t in 0..self.frames {
            for (i, v) in self.row(t).iter().enumerate() {
                if i > 0 {
                    s.push(' ');
                }
                if *v == f64::NEG_INFINITY {
                    s.push_str("-inf");
                } else {
                    let _ = write!(s, "{v}");
                }
            }
            s.push('\n');
        }
        s
    }
}
