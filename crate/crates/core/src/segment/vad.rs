//! Short-time energy voice activity detection.
//!
//! Frames are labelled speech when their log-energy exceeds an adaptive
//! threshold: the energy at `threshold_percentile` of the sorted frame
//! energies plus `margin_db`. The threshold is capped at
//! `max energy - margin_db` so that a signal with flat energy is not all
//! silence, and never drops below `min_energy_db`.

use serde::{Deserialize, Serialize};

use super::wav::AudioBuffer;
use super::Segment;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VadParams {
    pub frame_ms: f64,
    pub hop_ms: f64,
    pub threshold_percentile: f64,
    pub margin_db: f64,
    /// Energy assigned to digital silence.
    pub floor_db: f64,
    /// Frames at or below this energy are never speech.
    pub min_energy_db: f64,
    pub smoothing_frames: usize,
    pub min_silence_s: f64,
    pub min_speech_s: f64,
}

impl Default for VadParams {
    fn default() -> Self {
        VadParams {
            frame_ms: 25.0,
            hop_ms: 10.0,
            threshold_percentile: 0.3,
            margin_db: 6.0,
            floor_db: -120.0,
            min_energy_db: -60.0,
            smoothing_frames: 5,
            min_silence_s: 0.3,
            min_speech_s: 0.2,
        }
    }
}

impl VadParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.hop_ms > 0.0 && self.frame_ms >= self.hop_ms) {
            return Err(Error::invalid("VAD needs frame_ms >= hop_ms > 0"));
        }
        if !(self.threshold_percentile > 0.0 && self.threshold_percentile < 1.0) {
            return Err(Error::invalid(
                "VAD threshold percentile must lie in (0, 1)",
            ));
        }
        if self.smoothing_frames == 0 || self.smoothing_frames.is_multiple_of(2) {
            return Err(Error::invalid(
                "VAD smoothing window must be an odd frame count",
            ));
        }
        if self.min_silence_s < 0.0 || self.min_speech_s < 0.0 {
            return Err(Error::invalid("VAD minimum durations must be >= 0"));
        }
        Ok(())
    }

    fn frame_len(&self, rate: u32) -> usize {
        ((self.frame_ms * rate as f64 / 1000.0).round() as usize).max(1)
    }

    fn hop_len(&self, rate: u32) -> usize {
        ((self.hop_ms * rate as f64 / 1000.0).round() as usize).max(1)
    }
}

/// Per-frame energy `10 log10(mean(x^2))` in dB, floored at `floor_db`.
pub fn frame_energies_db(audio: &AudioBuffer, p: &VadParams) -> Result<Vec<f64>> {
    let frame = p.frame_len(audio.sample_rate);
    let hop = p.hop_len(audio.sample_rate);
    if audio.samples.len() < frame {
        return Err(Error::invalid(format!(
            "audio has {} samples, shorter than one {frame}-sample frame",
            audio.samples.len()
        )));
    }
    let n = 1 + (audio.samples.len() - frame) / hop;
    Ok((0..n)
        .map(|i| {
            let w = &audio.samples[i * hop..i * hop + frame];
            let power = w.iter().map(|s| s * s).sum::<f64>() / frame as f64;
            if power > 0.0 {
                (10.0 * power.log10()).max(p.floor_db)
            } else {
                p.floor_db
            }
        })
        .collect())
}

fn median_smooth(flags: &[bool], window: usize) -> Vec<bool> {
    let half = window / 2;
    (0..flags.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(flags.len());
            let on = flags[lo..hi].iter().filter(|&&f| f).count();
            2 * on > hi - lo
        })
        .collect()
}

pub fn energy_vad(audio: &AudioBuffer, rec_id: &str, p: &VadParams) -> Result<Vec<Segment>> {
    p.validate()?;
    let energies = frame_energies_db(audio, p)?;
    let mut sorted = energies.clone();
    sorted.sort_by(f64::total_cmp);
    let pct = sorted[(p.threshold_percentile * (sorted.len() - 1) as f64).floor() as usize];
    let max = sorted[sorted.len() - 1];
    let threshold = (pct + p.margin_db)
        .min(max - p.margin_db)
        .max(p.min_energy_db);

    let raw: Vec<bool> = energies.iter().map(|&e| e > threshold).collect();
    let speech = median_smooth(&raw, p.smoothing_frames);

    let rate = audio.sample_rate as f64;
    let hop_s = p.hop_len(audio.sample_rate) as f64 / rate;
    let frame_s = p.frame_len(audio.sample_rate) as f64 / rate;
    let total = audio.duration_s();
    let n = speech.len();
    // frame i stands for the hop-wide interval around its centre
    let start_of = |i: usize| {
        if i == 0 {
            0.0
        } else {
            (i as f64 * hop_s + (frame_s - hop_s) / 2.0).min(total)
        }
    };
    let end_of = |j: usize| {
        if j + 1 == n {
            total
        } else {
            (j as f64 * hop_s + (frame_s + hop_s) / 2.0).min(total)
        }
    };

    let mut runs: Vec<(f64, f64)> = Vec::new();
    let mut i = 0;
    while i < n {
        if !speech[i] {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && speech[j + 1] {
            j += 1;
        }
        let (s, e) = (start_of(i), end_of(j));
        match runs.last_mut() {
            Some(last) if s - last.1 < p.min_silence_s => last.1 = e,
            _ => runs.push((s, e)),
        }
        i = j + 1;
    }
    runs.into_iter()
        .filter(|(s, e)| e - s >= p.min_speech_s && e > s)
        .map(|(s, e)| Segment::new(rec_id, s, e))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const RATE: u32 = 16000;

    fn tone(seconds: f64) -> Vec<f64> {
        let n = (seconds * RATE as f64) as usize;
        (0..n)
            .map(|i| 0.9 * (2.0 * std::f64::consts::PI * 440.0 * i as f64 / RATE as f64).sin())
            .collect()
    }

    fn audio(parts: &[(bool, f64)]) -> AudioBuffer {
        let mut s = Vec::new();
        for &(on, secs) in parts {
            if on {
                s.extend(tone(secs));
            } else {
                s.extend(std::iter::repeat_n(0.0, (secs * RATE as f64) as usize));
            }
        }
        AudioBuffer::new(s, RATE).unwrap()
    }

    #[test]
    fn silence_has_no_segments() {
        let a = audio(&[(false, 2.0)]);
        assert!(energy_vad(&a, "r", &VadParams::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn tone_between_silences() {
        let a = audio(&[(false, 0.5), (true, 1.0), (false, 0.5)]);
        let segs = energy_vad(&a, "r", &VadParams::default()).unwrap();
        assert_eq!(segs.len(), 1);
        assert!((segs[0].start_s - 0.5).abs() <= 0.02, "{:?}", segs[0]);
        assert!((segs[0].end_s - 1.5).abs() <= 0.02, "{:?}", segs[0]);
    }

    #[test]
    fn unbroken_tone_spans_buffer() {
        let a = audio(&[(true, 1.0)]);
        let segs = energy_vad(&a, "r", &VadParams::default()).unwrap();
        assert_eq!(segs, vec![Segment::new("r", 0.0, 1.0).unwrap()]);
    }

    #[test]
    fn short_gaps_merge_and_short_bursts_drop() {
        let a = audio(&[
            (true, 0.5),
            (false, 0.1),
            (true, 0.5),
            (false, 1.0),
            (true, 0.05),
            (false, 1.0),
        ]);
        let segs = energy_vad(&a, "r", &VadParams::default()).unwrap();
        assert_eq!(segs.len(), 1);
        assert!((segs[0].end_s - 1.1).abs() <= 0.02);
    }

    #[test]
    fn rejects_short_audio_and_bad_params() {
        let a = AudioBuffer::new(vec![0.0; 100], RATE).unwrap();
        assert!(energy_vad(&a, "r", &VadParams::default()).is_err());
        let a = audio(&[(false, 1.0)]);
        let p = VadParams {
            smoothing_frames: 4,
            ..Default::default()
        };
        assert!(energy_vad(&a, "r", &p).is_err());
        let p = VadParams {
            hop_ms: 30.0,
            ..Default::default()
        };
        assert!(energy_vad(&a, "r", &p).is_err());
    }
}
