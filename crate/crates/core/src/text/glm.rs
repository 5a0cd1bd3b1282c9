//! Global mapping (GLM) rewrite rules applied before scoring.
//!
//! File format: one rule per line, `LHS => RHS`, tokens separated by
//! spaces. Lines starting with `;;` are comments. The RHS may be empty.

use std::path::Path;

use super::{Token, Transcript};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlmRule {
    pub lhs: Vec<Token>,
    pub rhs: Vec<Token>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GlmRules {
    rules: Vec<GlmRule>,
}

impl GlmRules {
    pub fn new(rules: Vec<GlmRule>) -> Result<Self> {
        if let Some(i) = rules.iter().position(|r| r.lhs.is_empty()) {
            return Err(Error::invalid(format!(
                "GLM rule {} has an empty left side",
                i + 1
            )));
        }
        Ok(GlmRules { rules })
    }

    pub fn rules(&self) -> &[GlmRule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut rules = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with(";;") {
                continue;
            }
            let Some((lhs, rhs)) = line.split_once("=>") else {
                return Err(Error::format(
                    origin,
                    i + 1,
                    "a rule of the form `LHS => RHS`",
                ));
            };
            let lhs: Vec<Token> = lhs.split_whitespace().map(|w| Token(w.into())).collect();
            if lhs.is_empty() {
                return Err(Error::format(origin, i + 1, "a non-empty left-hand side"));
            }
            let rhs = rhs.split_whitespace().map(|w| Token(w.into())).collect();
            rules.push(GlmRule { lhs, rhs });
        }
        Ok(GlmRules { rules })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Index of the rule to apply at the start of `tokens`: the longest
    /// matching left side, earliest in file order on equal length.
    fn best_match(&self, tokens: &[Token]) -> Option<&GlmRule> {
        let mut best: Option<&GlmRule> = None;
        for rule in &self.rules {
            if tokens.starts_with(&rule.lhs) && best.is_none_or(|b| rule.lhs.len() > b.lhs.len()) {
                best = Some(rule);
            }
        }
        best
    }

    /// Rewrites tokens left to right. A replaced span is never rescanned.
    pub fn apply(&self, transcript: &Transcript) -> Transcript {
        if self.rules.is_empty() {
            return transcript.clone();
        }
        let src = &transcript.tokens;
        let mut out = Vec::with_capacity(src.len());
        let mut i = 0;
        while i < src.len() {
            match self.best_match(&src[i..]) {
                Some(rule) => {
                    out.extend(rule.rhs.iter().cloned());
                    i += rule.lhs.len();
                }
                None => {
                    out.push(src[i].clone());
                    i += 1;
                }
            }
        }
        Transcript::new(transcript.utt_id.clone(), out)
    }
}

pub fn apply_glm(rules: &GlmRules, transcript: &Transcript) -> Transcript {
    rules.apply(transcript)
}
