//! Minimal RIFF/WAVE reader and writer for 16-bit PCM.

use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

const FORMAT_PCM: u16 = 1;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

#[derive(Debug, Error)]
pub enum WavError {
    #[error("{}: file not found", .0.display())]
    Missing(PathBuf),
    #[error("not a RIFF/WAVE file")]
    NotRiff,
    #[error(
        "unsupported encoding (format tag {format_tag:#06x}, {bits} bits); only 16-bit PCM is read"
    )]
    NotPcm { format_tag: u16, bits: u16 },
    #[error("truncated {chunk} chunk: header declares {declared} bytes, {available} present")]
    Truncated {
        chunk: String,
        declared: usize,
        available: usize,
    },
    #[error("malformed WAV: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Mono audio in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
}

impl AudioBuffer {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> crate::Result<Self> {
        if sample_rate == 0 {
            return Err(crate::Error::invalid("sample rate must be positive"));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(crate::Error::invalid("audio samples must be finite"));
        }
        Ok(AudioBuffer {
            samples,
            sample_rate,
        })
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

struct Format {
    channels: u16,
    sample_rate: u32,
}

fn u16_at(b: &[u8], i: usize) -> u16 {
    u16::from_le_bytes([b[i], b[i + 1]])
}

fn u32_at(b: &[u8], i: usize) -> u32 {
    u32::from_le_bytes([b[i], b[i + 1], b[i + 2], b[i + 3]])
}

fn parse_fmt(body: &[u8]) -> Result<Format, WavError> {
    if body.len() < 16 {
        return Err(WavError::Malformed(
            "fmt chunk shorter than 16 bytes".into(),
        ));
    }
    let mut format_tag = u16_at(body, 0);
    let channels = u16_at(body, 2);
    let sample_rate = u32_at(body, 4);
    let bits = u16_at(body, 14);
    if format_tag == FORMAT_EXTENSIBLE && body.len() >= 26 {
        // first two bytes of the sub-format GUID carry the real tag
        format_tag = u16_at(body, 24);
    }
    if format_tag != FORMAT_PCM || bits != 16 {
        return Err(WavError::NotPcm { format_tag, bits });
    }
    if channels == 0 || sample_rate == 0 {
        return Err(WavError::Malformed("zero channels or sample rate".into()));
    }
    Ok(Format {
        channels,
        sample_rate,
    })
}

/// Decodes a RIFF/WAVE byte buffer. Channels are averaged to mono and
/// samples scaled by 1/32768.
pub fn parse_wav(bytes: &[u8]) -> Result<AudioBuffer, WavError> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(WavError::NotRiff);
    }
    let mut pos = 12;
    let mut format = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let body_start = pos + 8;
        let available = bytes.len() - body_start;
        if id == b"data" {
            let fmt = format
                .as_ref()
                .ok_or_else(|| WavError::Malformed("data chunk before fmt chunk".into()))?;
            if size > available {
                return Err(WavError::Truncated {
                    chunk: "data".into(),
                    declared: size,
                    available,
                });
            }
            return decode_pcm16(&bytes[body_start..body_start + size], fmt);
        }
        if size > available {
            return Err(WavError::Truncated {
                chunk: String::from_utf8_lossy(id).into_owned(),
                declared: size,
                available,
            });
        }
        if id == b"fmt " {
            format = Some(parse_fmt(&bytes[body_start..body_start + size])?);
        }
        pos = body_start + size + (size & 1);
    }
    Err(WavError::Malformed("no data chunk".into()))
}

fn decode_pcm16(data: &[u8], fmt: &Format) -> Result<AudioBuffer, WavError> {
    let block = 2 * fmt.channels as usize;
    if !data.len().is_multiple_of(block) {
        return Err(WavError::Truncated {
            chunk: "data".into(),
            declared: data.len().next_multiple_of(block),
            available: data.len(),
        });
    }
    let samples = data
        .chunks_exact(block)
        .map(|frame| {
            let sum: f64 = frame
                .chunks_exact(2)
                .map(|s| i16::from_le_bytes([s[0], s[1]]) as f64 / 32768.0)
                .sum();
            sum / fmt.channels as f64
        })
        .collect();
    Ok(AudioBuffer {
        samples,
        sample_rate: fmt.sample_rate,
    })
}

pub fn read_wav(path: &Path) -> Result<AudioBuffer, WavError> {
    let bytes = std::fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => WavError::Missing(path.to_path_buf()),
        _ => WavError::Io(e),
    })?;
    parse_wav(&bytes)
}

/// Encodes interleaved 16-bit PCM with the given channel count.
pub fn encode_pcm16(interleaved: &[i16], channels: u16, sample_rate: u32) -> Vec<u8> {
    let data_len = interleaved.len() * 2;
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVEfmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&FORMAT_PCM.to_le_bytes());
    out.extend_from_slice(&channels.to_le_bytes());
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * 2 * channels as u32).to_le_bytes());
    out.extend_from_slice(&(2 * channels).to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for s in interleaved {
        out.extend_from_slice(&s.to_le_bytes());
    }
    out
}

fn to_i16(s: f64) -> i16 {
    (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16
}

pub fn write_wav(mut w: impl Write, audio: &AudioBuffer) -> std::io::Result<()> {
    let pcm: Vec<i16> = audio.samples.iter().map(|&s| to_i16(s)).collect();
    w.write_all(&encode_pcm16(&pcm, 1, audio.sample_rate))
}
