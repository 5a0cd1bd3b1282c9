use serde::Serialize;

use super::Segment;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BucketStat {
    pub label: &'static str,
    pub count: usize,
    pub percent: f64,
}

/// Duration histogram over `[0,15]`, `(15,30]`, `(30,inf)` seconds plus the
/// population mean and standard deviation. The effective range is
/// `mean +- 3 std`, clipped below at 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DurationStats {
    pub count: usize,
    pub buckets: [BucketStat; 3],
    pub mean_s: f64,
    pub std_s: f64,
    pub max_s: f64,
    pub effective_range: [f64; 2],
}

impl DurationStats {
    pub fn over_30_percent(&self) -> f64 {
        self.buckets[2].percent
    }
}

pub fn duration_stats(segments: &[Segment]) -> Result<DurationStats> {
    if segments.is_empty() {
        return Err(Error::invalid(
            "duration statistics need at least one segment",
        ));
    }
    let n = segments.len();
    let mut counts = [0usize; 3];
    for s in segments {
        let d = s.duration();
        let b = if d <= 15.0 {
            0
        } else if d <= 30.0 {
            1
        } else {
            2
        };
        counts[b] += 1;
    }
    let mean = segments.iter().map(Segment::duration).sum::<f64>() / n as f64;
    let var = segments
        .iter()
        .map(|s| (s.duration() - mean).powi(2))
        .sum::<f64>()
        / n as f64;
    let std = var.sqrt();
    let max = segments.iter().map(Segment::duration).fold(0.0, f64::max);
    let bucket = |label, count| BucketStat {
        label,
        count,
        percent: 100.0 * count as f64 / n as f64,
    };
    Ok(DurationStats {
        count: n,
        buckets: [
            bucket("0-15", counts[0]),
            bucket("15-30", counts[1]),
            bucket("30+", counts[2]),
        ],
        mean_s: mean,
        std_s: std,
        max_s: max,
        effective_range: [(mean - 3.0 * std).max(0.0), mean + 3.0 * std],
    })
}
