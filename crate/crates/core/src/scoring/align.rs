use serde::Serialize;

use super::wer::ErrorCounts;
use crate::text::Token;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum AlignOp {
    Correct { reference: Token },
    Sub { reference: Token, hypothesis: Token },
    Del { reference: Token },
    Ins { hypothesis: Token },
}

impl AlignOp {
    pub fn ref_token(&self) -> Option<&Token> {
        match self {
            AlignOp::Correct { reference }
            | AlignOp::Sub { reference, .. }
            | AlignOp::Del { reference } => Some(reference),
            AlignOp::Ins { .. } => None,
        }
    }

    pub fn hyp_token(&self) -> Option<&Token> {
        match self {
            AlignOp::Correct { reference } => Some(reference),
            AlignOp::Sub { hypothesis, .. } | AlignOp::Ins { hypothesis } => Some(hypothesis),
            AlignOp::Del { .. } => None,
        }
    }
}

/// An edit script turning a reference into a hypothesis.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct AlignmentOps {
    pub ops: Vec<AlignOp>,
}

impl AlignmentOps {
    pub fn counts(&self) -> ErrorCounts {
        let mut c = ErrorCounts::default();
        for op in &self.ops {
            match op {
                AlignOp::Correct { .. } => c.ref_len += 1,
                AlignOp::Sub { .. } => {
                    c.sub += 1;
                    c.ref_len += 1;
                }
                AlignOp::Del { .. } => {
                    c.del += 1;
                    c.ref_len += 1;
                }
                AlignOp::Ins { .. } => c.ins += 1,
            }
        }
        c
    }

    pub fn cost(&self) -> usize {
        self.counts().errors()
    }

    pub fn ref_side(&self) -> Vec<Token> {
        self.ops
            .iter()
            .filter_map(AlignOp::ref_token)
            .cloned()
            .collect()
    }

    pub fn hyp_side(&self) -> Vec<Token> {
        self.ops
            .iter()
            .filter_map(AlignOp::hyp_token)
            .cloned()
            .collect()
    }
}

/// Unit-cost Levenshtein alignment.
///
/// Among scripts with the fewest errors, those with the most substitutions
/// win; this makes the S/D/I split symmetric under swapping the sides. Any
/// remaining tie is broken in the backtrace, which prefers at each step from
/// the end Correct, then Sub, then Del, then Ins.
pub fn align(reference: &[Token], hypothesis: &[Token]) -> AlignmentOps {
    let (n, m) = (reference.len(), hypothesis.len());
    // path key = errors * k - substitutions; k exceeds any substitution count
    let k = n.min(m) as u64 + 1;
    let (sub_cost, gap_cost) = (k - 1, k);
    let w = m + 1;
    let mut d = vec![0u64; (n + 1) * w];
    for (j, cell) in d[..w].iter_mut().enumerate() {
        *cell = j as u64 * gap_cost;
    }
    for i in 1..=n {
        d[i * w] = i as u64 * gap_cost;
        for j in 1..=m {
            let step = if reference[i - 1] == hypothesis[j - 1] {
                0
            } else {
                sub_cost
            };
            let diag = d[(i - 1) * w + j - 1] + step;
            let up = d[(i - 1) * w + j] + gap_cost;
            let left = d[i * w + j - 1] + gap_cost;
            d[i * w + j] = diag.min(up).min(left);
        }
    }

    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = d[i * w + j];
        if i > 0 && j > 0 {
            let same = reference[i - 1] == hypothesis[j - 1];
            let diag = d[(i - 1) * w + j - 1];
            if same && here == diag {
                ops.push(AlignOp::Correct {
                    reference: reference[i - 1].clone(),
                });
                i -= 1;
                j -= 1;
                continue;
            }
            if !same && here == diag + sub_cost {
                ops.push(AlignOp::Sub {
                    reference: reference[i - 1].clone(),
                    hypothesis: hypothesis[j - 1].clone(),
                });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && here == d[(i - 1) * w + j] + gap_cost {
            ops.push(AlignOp::Del {
                reference: reference[i - 1].clone(),
            });
            i -= 1;
        } else {
            ops.push(AlignOp::Ins {
                hypothesis: hypothesis[j - 1].clone(),
            });
            j -= 1;
        }
    }
    ops.reverse();
    AlignmentOps { ops }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Transcript;

    fn toks(s: &str) -> Vec<Token> {
        Transcript::from_text("u", s).tokens
    }

    fn t(s: &str) -> Token {
        Token::new(s).unwrap()
    }

    #[test]
    fn identity() {
        let a = align(&toks("a b c"), &toks("a b c"));
        assert_eq!(a.ops.len(), 3);
        assert!(a.ops.iter().all(|o| matches!(o, AlignOp::Correct { .. })));
    }

    #[test]
    fn single_substitution() {
        let a = align(&toks("a b c"), &toks("a x c"));
        assert_eq!(
            a.ops,
            vec![
                AlignOp::Correct { reference: t("a") },
                AlignOp::Sub {
                    reference: t("b"),
                    hypothesis: t("x")
                },
                AlignOp::Correct { reference: t("c") },
            ]
        );
    }

    #[test]
    fn deletion_beats_substitution_pair() {
        let a = align(&toks("a b"), &toks("b"));
        assert_eq!(
            a.ops,
            vec![
                AlignOp::Del { reference: t("a") },
                AlignOp::Correct { reference: t("b") }
            ]
        );
    }

    #[test]
    fn most_substitutions_among_optimal() {
        let r = toks("b b a a c");
        let h = toks("a a c b b a");
        let fwd = align(&r, &h).counts();
        let back = align(&h, &r).counts();
        assert_eq!((fwd.sub, fwd.del, fwd.ins), (2, 1, 2));
        assert_eq!((back.sub, back.del, back.ins), (2, 2, 1));
    }

    #[test]
    fn empty_sides() {
        assert_eq!(align(&toks(""), &toks("")).ops, vec![]);
        let c = align(&toks("a b c d"), &toks("")).counts();
        assert_eq!((c.del, c.ref_len), (4, 4));
        let c = align(&toks(""), &toks("x y")).counts();
        assert_eq!((c.ins, c.ref_len), (2, 0));
    }

    #[test]
    fn replay_reproduces_both_sides() {
        let r = toks("a b c a b");
        let h = toks("b b c c a");
        let a = align(&r, &h);
        assert_eq!(a.ref_side(), r);
        assert_eq!(a.hyp_side(), h);
    }
}
