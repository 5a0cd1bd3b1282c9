//! Inter-annotator disagreement matrices and the disagreement gap.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::wer::wer;
use crate::error::{Error, Result};
use crate::text::{Token, Transcript};

/// Pairwise WER between transcript collections: row = hypothesis,
/// column = reference, values in percent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisagreementMatrix {
    pub labels: Vec<String>,
    pub cells: Vec<Vec<f64>>,
}

impl DisagreementMatrix {
    pub fn get(&self, hyp: usize, reference: usize) -> f64 {
        self.cells[hyp][reference]
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("hyp\\ref");
        for l in &self.labels {
            s.push('\t');
            s.push_str(l);
        }
        s.push('\n');
        for (label, row) in self.labels.iter().zip(&self.cells) {
            s.push_str(label);
            for v in row {
                s.push_str(&format!("\t{:.1}", v));
            }
            s.push('\n');
        }
        s
    }
}

/// Pooled WER of collection `hyp` scored against collection `reference`,
/// matched by utterance id.
pub fn disagreement(hyp: &[Transcript], reference: &[Transcript]) -> Result<f64> {
    let by_id: HashMap<&str, &Transcript> = hyp.iter().map(|t| (t.utt_id.as_str(), t)).collect();
    let pairs: Vec<(&[Token], &[Token])> = reference
        .iter()
        .map(|r| {
            by_id
                .get(r.utt_id.as_str())
                .map(|h| (r.tokens.as_slice(), h.tokens.as_slice()))
                .ok_or_else(|| {
                    Error::invalid(format!(
                        "utterance {} is missing from the hypothesis",
                        r.utt_id
                    ))
                })
        })
        .collect::<Result<_>>()?;
    Ok(wer(&pairs)?.rate().unwrap_or_default())
}

pub fn disagreement_matrix(sets: &[(String, Vec<Transcript>)]) -> Result<DisagreementMatrix> {
    if let Some((first_name, first)) = sets.first() {
        let ids: HashSet<&str> = first.iter().map(|t| t.utt_id.as_str()).collect();
        for (name, set) in &sets[1..] {
            let other: HashSet<&str> = set.iter().map(|t| t.utt_id.as_str()).collect();
            if other != ids {
                return Err(Error::invalid(format!(
                    "{name} and {first_name} do not cover the same utterances"
                )));
            }
        }
    }
    let n = sets.len();
    let mut cells = vec![vec![0.0; n]; n];
    for h in 0..n {
        for r in 0..n {
            if h != r {
                cells[h][r] = disagreement(&sets[h].1, &sets[r].1)?;
            }
        }
    }
    Ok(DisagreementMatrix {
        labels: sets.iter().map(|(n, _)| n.clone()).collect(),
        cells,
    })
}

/// Disagreement gap between one annotator `a` and a group `B`:
///
/// `G = 1/(J+K) * sum_j sum_{k != j} |disag(a, b_j) - disag(b_j, b_k)|`
///
/// `a_to_b[j]` is `disag(a, b_j)`; `b_to_b[j][k]` is `disag(b_j, b_k)`.
/// Diagonal entries of `b_to_b` are ignored.
pub fn gap(a_to_b: &[f64], b_to_b: &[Vec<f64>]) -> Result<f64> {
    let j_len = a_to_b.len();
    if j_len == 0 {
        return Err(Error::invalid("gap needs at least one a-to-b disagreement"));
    }
    if b_to_b.len() != j_len {
        return Err(Error::invalid(format!(
            "intra-group matrix has {} rows, expected {j_len}",
            b_to_b.len()
        )));
    }
    let k_len = b_to_b[0].len();
    if k_len < 2 {
        return Err(Error::invalid("gap needs at least two group members"));
    }
    if b_to_b.iter().any(|row| row.len() != k_len) {
        return Err(Error::invalid("intra-group matrix is ragged"));
    }
    let mut sum = 0.0;
    for (j, &a) in a_to_b.iter().enumerate() {
        for (k, &b) in b_to_b[j].iter().enumerate() {
            if j != k {
                sum += (a - b).abs();
            }
        }
    }
    Ok(sum / (j_len + k_len) as f64)
}
