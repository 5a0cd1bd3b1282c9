//! Benchmarking and decoding toolkit for Arabic (and general) speech recognition.
//!
//! The crate is organised by pipeline stage:
//!
//! * [`text`]: Buckwalter transliteration, orthographic normalization, GLM
//!   rewriting, chunking and BPE subword models.
//! * [`scoring`]: Levenshtein alignment, WER, multi-reference WER, error
//!   tables, disagreement matrices and the disagreement gap.
//! * [`kernels`]: forward-only transformer reference kernels and the loss /
//!   score combination formulas.
//! * [`decode`]: CTC scoring, greedy and joint prefix beam search, and an
//!   add-k n-gram language model.
//! * [`segment`]: WAV input, energy VAD, long-segment capping and duration
//!   statistics.
//! * [`cli`]: the batch command-line front end.

pub mod cli;
pub mod decode;
pub mod error;
pub mod kernels;
pub mod scoring;
pub mod segment;
pub mod text;

pub use error::{Error, Result};
