//! CTC scoring, greedy and joint prefix beam decoding, and an add-k n-gram
//! language model for shallow fusion.

mod beam;
mod ctc;
mod ngram;
mod posterior;
mod scorer;

pub use beam::{joint_beam_search, nbest_json, BeamConfig, Hypothesis};
pub use ctc::{ctc_greedy, ctc_log_prob, log_add, CtcPrefixScorer, CtcPrefixState};
pub use ngram::{lm_train, perplexity, NgramLm, NgramScorer, BOS, EOS};
pub use posterior::{PosteriorMatrix, Vocab};
pub use scorer::{MarkovTable, NullScorer, SequenceScorer};
