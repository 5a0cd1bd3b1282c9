//! Audio segmentation: WAV input, energy VAD, long-segment capping and
//! duration statistics.

mod cap;
mod stats;
mod vad;
pub mod wav;

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

pub use cap::{cap_segments, DEFAULT_MAX_DUR_S};
pub use stats::{duration_stats, BucketStat, DurationStats};
pub use vad::{energy_vad, frame_energies_db, VadParams};
pub use wav::{read_wav, AudioBuffer, WavError};

/// A time interval `[start_s, end_s)` of one recording.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub rec_id: String,
    pub start_s: f64,
    pub end_s: f64,
}

impl Segment {
    pub fn new(rec_id: impl Into<String>, start_s: f64, end_s: f64) -> Result<Self> {
        let rec_id = rec_id.into();
        if !(start_s.is_finite() && end_s.is_finite() && 0.0 <= start_s && start_s < end_s) {
            return Err(Error::Segment(format!(
                "{rec_id}: need 0 <= start < end, got [{start_s}, {end_s}]"
            )));
        }
        Ok(Segment {
            rec_id,
            start_s,
            end_s,
        })
    }

    pub fn duration(&self) -> f64 {
        self.end_s - self.start_s
    }

    /// Kaldi-style id: `<rec>-<start ms>-<end ms>`.
    pub fn default_id(&self) -> String {
        format!(
            "{}-{:08}-{:08}",
            self.rec_id,
            (self.start_s * 1000.0).round() as u64,
            (self.end_s * 1000.0).round() as u64
        )
    }
}

/// Parses `<seg_id> <rec_id> <start_s> <end_s>` lines.
pub fn parse_segments(text: &str, origin: &str) -> Result<Vec<Segment>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.is_empty() {
            continue;
        }
        let expect = "`<seg_id> <rec_id> <start_s> <end_s>` with 0 <= start < end";
        if f.len() != 4 {
            return Err(Error::format(origin, i + 1, expect));
        }
        let (Ok(start), Ok(end)) = (f[2].parse::<f64>(), f[3].parse::<f64>()) else {
            return Err(Error::format(origin, i + 1, expect));
        };
        out.push(Segment::new(f[1], start, end).map_err(|_| Error::format(origin, i + 1, expect))?);
    }
    Ok(out)
}

pub fn read_segments(path: &Path) -> Result<Vec<Segment>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })?;
    parse_segments(&text, &path.display().to_string())
}

pub fn format_segments(segments: &[Segment]) -> String {
    let mut s = String::new();
    for seg in segments {
        let _ = writeln!(
            s,
            "{} {} {} {}",
            seg.default_id(),
            seg.rec_id,
            seg.start_s,
            seg.end_s
        );
    }
    s
}

/// Checks that, per recording, segments appear in increasing order and do
/// not overlap.
pub fn check_sorted(segments: &[Segment], what: &str) -> Result<()> {
    let mut last_end: std::collections::HashMap<&str, f64> = Default::default();
    for s in segments {
        if let Some(&end) = last_end.get(s.rec_id.as_str()) {
            if s.start_s < end {
                return Err(Error::Segment(format!(
                    "{what}: segment [{}, {}] of {} overlaps or precedes the previous one",
                    s.start_s, s.end_s, s.rec_id
                )));
            }
        }
        last_end.insert(&s.rec_id, s.end_s);
    }
    Ok(())
}
