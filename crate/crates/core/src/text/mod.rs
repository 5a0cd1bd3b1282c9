//! Transcript types and text processing.

pub mod bpe;
pub mod buckwalter;
pub mod chunk;
pub mod glm;
pub mod normalize;

use std::collections::HashSet;
use std::fmt;
use std::ops::Deref;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bpe::{bpe_train, BpeModel};
pub use buckwalter::{arabic_to_bw, bw_to_arabic};
pub use chunk::chunk_text;
pub use glm::{apply_glm, GlmRules};
pub use normalize::{normalize, NormalizationPolicy};

/// A single word unit: non-empty and free of whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Token(String);

impl Token {
    pub fn new(value: impl Into<String>) -> Result<Self> {
        let value = value.into();
        if value.is_empty() || value.chars().any(char::is_whitespace) {
            return Err(Error::InvalidToken(value));
        }
        Ok(Token(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl Deref for Token {
    type Target = str;

    fn deref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for Token {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Token::new(value)
    }
}

impl TryFrom<&str> for Token {
    type Error = Error;

    fn try_from(value: &str) -> Result<Self> {
        Token::new(value)
    }
}

impl From<Token> for String {
    fn from(t: Token) -> String {
        t.0
    }
}

/// An utterance id and its ordered tokens. The token list may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub utt_id: String,
    pub tokens: Vec<Token>,
}

impl Transcript {
    pub fn new(utt_id: impl Into<String>, tokens: Vec<Token>) -> Self {
        Transcript {
            utt_id: utt_id.into(),
            tokens,
        }
    }

    /// Splits `text` on whitespace into tokens.
    pub fn from_text(utt_id: impl Into<String>, text: &str) -> Self {
        let tokens = text
            .split_whitespace()
            .map(|w| Token(w.to_string()))
            .collect();
        Transcript::new(utt_id, tokens)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn text(&self) -> String {
        join_tokens(&self.tokens)
    }

    /// Rebuilds the transcript with each token rewritten by `f`. Tokens that
    /// map to an empty string are dropped; whitespace in the result splits
    /// the token.
    pub fn map_tokens(&self, mut f: impl FnMut(&str) -> String) -> Transcript {
        let mut tokens = Vec::with_capacity(self.tokens.len());
        for t in &self.tokens {
            let out = f(t);
            tokens.extend(out.split_whitespace().map(|w| Token(w.to_string())));
        }
        Transcript::new(self.utt_id.clone(), tokens)
    }
}

pub(crate) fn join_tokens(tokens: &[Token]) -> String {
    let mut s = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(t);
    }
    s
}

/// Parses the transcript format: one utterance per line, `<utt_id> <token>...`.
/// Blank lines are skipped; utterance ids must be unique.
pub fn parse_transcripts(text: &str, origin: &str) -> Result<Vec<Transcript>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let mut fields = line.split_whitespace();
        let Some(utt_id) = fields.next() else {
            continue;
        };
        if !seen.insert(utt_id.to_string()) {
            return Err(Error::format(
                origin,
                lineno + 1,
                format!("a unique utterance id (duplicate {utt_id:?})"),
            ));
        }
        let tokens = fields.map(|w| Token(w.to_string())).collect();
        out.push(Transcript::new(utt_id, tokens));
    }
    Ok(out)
}

pub fn format_transcripts(transcripts: &[Transcript]) -> String {
    let mut s = String::new();
    for t in transcripts {
        s.push_str(&t.utt_id);
        for tok in &t.tokens {
            s.push(' ');
            s.push_str(tok);
        }
        s.push('\n');
    }
    s
}

pub fn read_transcripts(path: &Path) -> Result<Vec<Transcript>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })?;
    parse_transcripts(&text, &path.display().to_string())
}

impl AsRef<[Token]> for Transcript {
    fn as_ref(&self) -> &[Token] {
        &self.tokens
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn token_rejects_whitespace_and_empty() {
        assert!(Token::new("").is_err());
        assert!(Token::new("a b").is_err());
        assert!(Token::new("a\u{00a0}").is_err());
        assert_eq!(Token::new("ktAb").unwrap().as_str(), "ktAb");
    }

    #[test]
    fn parse_allows_empty_token_list() {
        let ts = parse_transcripts("u1 a b\nu2\n\nu3   c\n", "mem").unwrap();
        assert_eq!(ts.len(), 3);
        assert!(ts[1].is_empty());
        assert_eq!(ts[2].text(), "c");
        assert_eq!(format_transcripts(&ts), "u1 a b\nu2\nu3 c\n");
    }

    #[test]
    fn parse_rejects_duplicate_ids() {
        let err = parse_transcripts("u1 a\nu1 b\n", "refs.txt").unwrap_err();
        assert_eq!(
            err.to_string(),
            "refs.txt:2: expected a unique utterance id (duplicate \"u1\")"
        );
    }
}
