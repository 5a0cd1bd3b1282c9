//! Edit-distance scoring: WER, multi-reference WER, error tables and
//! inter-annotator disagreement.

pub mod align;
pub mod disagreement;
pub mod multi;
pub mod tables;
pub mod wer;

pub use align::{align, AlignOp, AlignmentOps};
pub use disagreement::{disagreement_matrix, gap, DisagreementMatrix};
pub use multi::{av_wer, build_confusion_network, mr_wer, Alternative, ConfusionNetwork};
pub use tables::{top_errors, ErrorTables};
pub use wer::{wer, ErrorCounts};

/// Rounds a percentage to one decimal place for display.
pub fn round_rate(rate: f64) -> f64 {
    (rate * 10.0).round() / 10.0
}
