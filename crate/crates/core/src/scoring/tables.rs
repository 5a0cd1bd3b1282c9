//! Most frequent substitutions, insertions and deletions.

use std::collections::HashMap;

use serde::Serialize;

use super::align::{AlignOp, AlignmentOps};
use crate::error::{Error, Result};
use crate::text::Token;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubEntry {
    pub count: usize,
    pub reference: Token,
    pub hypothesis: Token,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TokenEntry {
    pub count: usize,
    pub token: Token,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ErrorTables {
    pub substitutions: Vec<SubEntry>,
    pub insertions: Vec<TokenEntry>,
    pub deletions: Vec<TokenEntry>,
}

impl SubEntry {
    /// `count: ref / hyp`
    pub fn line(&self) -> String {
        format!("{}: {} / {}", self.count, self.reference, self.hypothesis)
    }
}

impl TokenEntry {
    pub fn line(&self) -> String {
        format!("{}: {}", self.count, self.token)
    }
}

impl ErrorTables {
    pub fn is_empty(&self) -> bool {
        self.substitutions.is_empty() && self.insertions.is_empty() && self.deletions.is_empty()
    }

    /// Tab-separated rendering: one row per rank, columns for each table.
    pub fn to_tsv(&self) -> String {
        let rows = self
            .substitutions
            .len()
            .max(self.insertions.len())
            .max(self.deletions.len());
        let mut s = String::from("rank\tsubstitution\tinsertion\tdeletion\n");
        for i in 0..rows {
            let sub = self
                .substitutions
                .get(i)
                .map(SubEntry::line)
                .unwrap_or_default();
            let ins = self
                .insertions
                .get(i)
                .map(TokenEntry::line)
                .unwrap_or_default();
            let del = self
                .deletions
                .get(i)
                .map(TokenEntry::line)
                .unwrap_or_default();
            s.push_str(&format!("{}\t{sub}\t{ins}\t{del}\n", i + 1));
        }
        s
    }
}

fn ranked<K: Ord + Clone>(counts: HashMap<K, usize>, n: usize) -> Vec<(usize, K)> {
    let mut v: Vec<(usize, K)> = counts.into_iter().map(|(k, c)| (c, k)).collect();
    v.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    v.truncate(n);
    v
}

/// Top `n` entries of each table, by descending count then key.
pub fn top_errors(alignments: &[AlignmentOps], n: usize) -> Result<ErrorTables> {
    if n == 0 {
        return Err(Error::invalid("error tables need n >= 1"));
    }
    let mut subs: HashMap<(&Token, &Token), usize> = HashMap::new();
    let mut ins: HashMap<&Token, usize> = HashMap::new();
    let mut dels: HashMap<&Token, usize> = HashMap::new();
    for op in alignments.iter().flat_map(|a| &a.ops) {
        match op {
            AlignOp::Correct { .. } => {}
            AlignOp::Sub {
                reference,
                hypothesis,
            } => *subs.entry((reference, hypothesis)).or_default() += 1,
            AlignOp::Ins { hypothesis } => *ins.entry(hypothesis).or_default() += 1,
            AlignOp::Del { reference } => *dels.entry(reference).or_default() += 1,
        }
    }
    let entry = |(count, t): (usize, &Token)| TokenEntry {
        count,
        token: t.clone(),
    };
    Ok(ErrorTables {
        substitutions: ranked(subs, n)
            .into_iter()
            .map(|(count, (r, h))| SubEntry {
                count,
                reference: r.clone(),
                hypothesis: h.clone(),
            })
            .collect(),
        insertions: ranked(ins, n).into_iter().map(entry).collect(),
        deletions: ranked(dels, n).into_iter().map(entry).collect(),
    })
}
