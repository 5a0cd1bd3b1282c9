//! Capping long detector segments using silence boundaries from a second
//! segmentation of the same audio.

use std::collections::BTreeMap;

use super::{check_sorted, Segment};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_DUR_S: f64 = 25.0;

/// Splits every `primary` segment longer than `max_dur_s`.
///
/// Candidate cuts are the midpoints of the gaps between consecutive
/// `boundaries` segments of the same recording. From the current start the
/// farthest candidate within `max_dur_s` is taken; without one, the cut is
/// forced at `start + max_dur_s`. Pieces are contiguous, so the covered
/// time per recording is unchanged. Output is ordered by recording, then
/// start.
pub fn cap_segments(
    primary: &[Segment],
    boundaries: &[Segment],
    max_dur_s: f64,
) -> Result<Vec<Segment>> {
    if !(max_dur_s > 0.0 && max_dur_s.is_finite()) {
        return Err(Error::invalid(format!(
            "maximum duration must be positive, got {max_dur_s}"
        )));
    }
    check_sorted(primary, "primary segments")?;
    check_sorted(boundaries, "boundary segments")?;

    let mut midpoints: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    let mut prev: BTreeMap<&str, f64> = BTreeMap::new();
    for b in boundaries {
        if let Some(&end) = prev.get(b.rec_id.as_str()) {
            if b.start_s > end {
                midpoints
                    .entry(&b.rec_id)
                    .or_default()
                    .push((end + b.start_s) / 2.0);
            }
        }
        prev.insert(&b.rec_id, b.end_s);
    }

    let mut out = Vec::with_capacity(primary.len());
    for seg in primary {
        let mids = midpoints
            .get(seg.rec_id.as_str())
            .map_or(&[][..], Vec::as_slice);
        let mut cur = seg.start_s;
        while seg.end_s - cur > max_dur_s {
            let cut = mids
                .iter()
                .copied()
                .rfind(|&m| m > cur && m < seg.end_s && m - cur <= max_dur_s)
                .unwrap_or_else(|| forced_cut(cur, max_dur_s));
            out.push(Segment::new(&seg.rec_id, cur, cut)?);
            cur = cut;
        }
        out.push(Segment::new(&seg.rec_id, cur, seg.end_s)?);
    }
    out.sort_by(|a, b| {
        a.rec_id
            .cmp(&b.rec_id)
            .then(a.start_s.total_cmp(&b.start_s))
    });
    Ok(out)
}

/// `start + max`, nudged down until the piece length really is `<= max`.
fn forced_cut(start: f64, max: f64) -> f64 {
    let mut cut = start + max;
    while cut - start > max {
        cut = cut.next_down();
    }
    cut
}
