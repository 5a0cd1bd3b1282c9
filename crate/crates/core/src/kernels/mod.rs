//! Forward-only reference kernels for transformer attention, feed-forward,
//! positional encoding, and the loss / score combination formulas.

mod attention;
mod combine;
mod matrix;

pub use attention::{
    attention_weights, multi_head_attention, position_wise_ff, positional_encoding, self_attention,
    AttentionWeights, FeedForward, HeadProjection,
};
pub use combine::{combine_losses, combine_scores, CombineConfig};
pub use matrix::Matrix;
