use super::posterior::{PosteriorMatrix, Vocab};
use crate::error::{Error, Result};

const NEG_INF: f64 = f64::NEG_INFINITY;

/// `log(exp(a) + exp(b))` with `-inf` as the additive identity.
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == NEG_INF {
        return b;
    }
    if b == NEG_INF {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

fn check_labels(labels: &[usize], vocab: &Vocab, post: &PosteriorMatrix) -> Result<()> {
    if vocab.len() != post.vocab_size() {
        return Err(Error::Dimension(format!(
            "vocabulary has {} symbols, posteriors have {}",
            vocab.len(),
            post.vocab_size()
        )));
    }
    for &l in labels {
        if l >= vocab.len() || l == vocab.blank_id() {
            return Err(Error::invalid(format!(
                "label {l} is blank or outside the vocabulary"
            )));
        }
    }
    Ok(())
}

/// Log of the total probability of all frame alignments that collapse to
/// `labels`. Returns `-inf` when the labels cannot fit in the frames.
pub fn ctc_log_prob(post: &PosteriorMatrix, labels: &[usize], vocab: &Vocab) -> Result<f64> {
    check_labels(labels, vocab, post)?;
    let blank = vocab.blank_id();
    let frames = post.frames();
    let ext: Vec<usize> = std::iter::once(blank)
        .chain(labels.iter().flat_map(|&l| [l, blank]))
        .collect();
    let s_len = ext.len();

    let mut alpha = vec![NEG_INF; s_len];
    alpha[0] = post.get(0, blank);
    if s_len > 1 {
        alpha[1] = post.get(0, ext[1]);
    }
    let mut next = vec![NEG_INF; s_len];
    for t in 1..frames {
        for s in 0..s_len {
            let mut a = alpha[s];
            if s >= 1 {
                a = log_add(a, alpha[s - 1]);
            }
            if s >= 2 && ext[s] != blank && ext[s] != ext[s - 2] {
                a = log_add(a, alpha[s - 2]);
            }
            next[s] = if a == NEG_INF {
                NEG_INF
            } else {
                a + post.get(t, ext[s])
            };
        }
        std::mem::swap(&mut alpha, &mut next);
    }
    let mut total = alpha[s_len - 1];
    if s_len > 1 {
        total = log_add(total, alpha[s_len - 2]);
    }
    Ok(total)
}

/// Best-path decoding: per-frame argmax (lowest index on ties), repeats
/// collapsed, blanks dropped.
pub fn ctc_greedy(post: &PosteriorMatrix, vocab: &Vocab) -> Vec<usize> {
    let mut out = Vec::new();
    let mut prev = None;
    for t in 0..post.frames() {
        let row = post.row(t);
        let mut best = 0;
        for (i, &v) in row.iter().enumerate() {
            if v > row[best] {
                best = i;
            }
        }
        if Some(best) != prev && best != vocab.blank_id() {
            out.push(best);
        }
        prev = Some(best);
    }
    out
}

/// Forward variables of a prefix: `ends_label[t]` / `ends_blank[t]` are the
/// log-probabilities that frames `0..=t` emit exactly the prefix, with the
/// last frame on a label or on blank.
#[derive(Debug, Clone, PartialEq)]
pub struct CtcPrefixState {
    ends_label: Vec<f64>,
    ends_blank: Vec<f64>,
    last: Option<usize>,
}

/// Incremental CTC prefix scoring for label-synchronous decoding.
pub struct CtcPrefixScorer<'a> {
    post: &'a PosteriorMatrix,
    blank: usize,
}

impl<'a> CtcPrefixScorer<'a> {
    pub fn new(post: &'a PosteriorMatrix, vocab: &Vocab) -> Result<Self> {
        check_labels(&[], vocab, post)?;
        Ok(CtcPrefixScorer {
            post,
            blank: vocab.blank_id(),
        })
    }

    /// State of the empty prefix.
    pub fn start(&self) -> CtcPrefixState {
        let frames = self.post.frames();
        let mut ends_blank = Vec::with_capacity(frames);
        let mut acc = 0.0;
        for t in 0..frames {
            acc += self.post.get(t, self.blank);
            ends_blank.push(acc);
        }
        CtcPrefixState {
            ends_label: vec![NEG_INF; frames],
            ends_blank,
            last: None,
        }
    }

    /// Extends `state` by `label`. Returns the log-probability that the
    /// output starts with the extended prefix, and the extended state.
    pub fn extend(&self, state: &CtcPrefixState, label: usize) -> (f64, CtcPrefixState) {
        let frames = self.post.frames();
        let mut ends_label = vec![NEG_INF; frames];
        let mut ends_blank = vec![NEG_INF; frames];
        let x = |t: usize, v: usize| self.post.get(t, v);
        let add = |a: f64, b: f64| if a == NEG_INF { NEG_INF } else { a + b };

        if state.last.is_none() {
            ends_label[0] = x(0, label);
        }
        let mut prefix = ends_label[0];
        for t in 1..frames {
            let phi = if state.last == Some(label) {
                state.ends_blank[t - 1]
            } else {
                log_add(state.ends_blank[t - 1], state.ends_label[t - 1])
            };
            ends_label[t] = add(log_add(ends_label[t - 1], phi), x(t, label));
            ends_blank[t] = add(
                log_add(ends_blank[t - 1], ends_label[t - 1]),
                x(t, self.blank),
            );
            prefix = log_add(prefix, add(phi, x(t, label)));
        }
        (
            prefix,
            CtcPrefixState {
                ends_label,
                ends_blank,
                last: Some(label),
            },
        )
    }

    /// Probability that the output is exactly the prefix of `state`.
    pub fn complete(&self, state: &CtcPrefixState) -> f64 {
        let t = self.post.frames() - 1;
        log_add(state.ends_label[t], state.ends_blank[t])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab(n: usize) -> Vocab {
        let mut s = vec!["<b>".to_string()];
        s.extend((1..n).map(|i| ((b'a' + i as u8 - 1) as char).to_string()));
        Vocab::new(s, 0).unwrap()
    }

    #[test]
    fn single_frame() {
        let post = PosteriorMatrix::from_probs(&[vec![0.4, 0.6]]).unwrap();
        let lp = ctc_log_prob(&post, &[1], &vocab(2)).unwrap();
        assert!((lp - 0.6f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn two_uniform_frames() {
        let post = PosteriorMatrix::from_probs(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let v = vocab(2);
        assert!((ctc_log_prob(&post, &[1], &v).unwrap() - 0.75f64.ln()).abs() < 1e-12);
        assert_eq!(ctc_log_prob(&post, &[1, 1], &v).unwrap(), NEG_INF);
        assert!((ctc_log_prob(&post, &[], &v).unwrap() - 0.25f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_blank_label() {
        let post = PosteriorMatrix::from_probs(&[vec![0.5, 0.5]]).unwrap();
        assert!(ctc_log_prob(&post, &[0], &vocab(2)).is_err());
        assert!(ctc_log_prob(&post, &[2], &vocab(2)).is_err());
    }

    fn one_hot(path: &[usize], v: usize) -> PosteriorMatrix {
        let rows: Vec<Vec<f64>> = path
            .iter()
            .map(|&i| (0..v).map(|j| if i == j { 0.0 } else { NEG_INF }).collect())
            .collect();
        PosteriorMatrix::new(path.len(), v, rows.concat()).unwrap()
    }

    #[test]
    fn greedy_collapse() {
        let v = vocab(2);
        assert_eq!(ctc_greedy(&one_hot(&[1, 0, 1], 2), &v), vec![1, 1]);
        assert_eq!(ctc_greedy(&one_hot(&[1, 1, 0], 2), &v), vec![1]);
        assert!(ctc_greedy(&one_hot(&[0, 0], 2), &v).is_empty());
        let tie = PosteriorMatrix::from_probs(&[vec![0.5, 0.5]]).unwrap();
        assert!(ctc_greedy(&tie, &v).is_empty());
    }

    #[test]
    fn prefix_state_completes_to_full_probability() {
        let post = PosteriorMatrix::from_probs(&[
            vec![0.2, 0.5, 0.3],
            vec![0.6, 0.1, 0.3],
            vec![0.1, 0.2, 0.7],
        ])
        .unwrap();
        let v = vocab(3);
        let scorer = CtcPrefixScorer::new(&post, &v).unwrap();
        let root = scorer.start();
        assert!((scorer.complete(&root) - ctc_log_prob(&post, &[], &v).unwrap()).abs() < 1e-12);
        let (_, s1) = scorer.extend(&root, 1);
        let (_, s2) = scorer.extend(&s1, 1);
        let (_, s3) = scorer.extend(&s1, 2);
        for (state, labels) in [(&s1, vec![1]), (&s2, vec![1, 1]), (&s3, vec![1, 2])] {
            let full = ctc_log_prob(&post, &labels, &v).unwrap();
            assert!((scorer.complete(state) - full).abs() < 1e-12, "{labels:?}");
        }
    }

    #[test]
    fn log_add_identity() {
        assert_eq!(log_add(NEG_INF, -1.0), -1.0);
        assert_eq!(log_add(NEG_INF, NEG_INF), NEG_INF);
        assert!((log_add(0.5f64.ln(), 0.5f64.ln())).abs() < 1e-15);
    }
}
