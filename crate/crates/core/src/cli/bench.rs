//! Side-by-side segmentation benchmark: capping, duration statistics and
//! WER for each configured condition.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{json, Value};

use super::args::PipelineBenchArgs;
use super::run::{load_segments, load_transcripts, pair_by_id};
use super::{write_atomic, CliResult, Context, Failure};
use crate::error::{Error, Result};
use crate::scoring::{round_rate, wer};
use crate::segment::wav::parse_wav;
use crate::segment::{
    cap_segments, duration_stats, energy_vad, DurationStats, Segment, VadParams, DEFAULT_MAX_DUR_S,
};
use crate::text::Token;

#[derive(Debug, Deserialize)]
struct BenchConfig {
    #[serde(default)]
    condition: Vec<Condition>,
}

/// Paths are relative to the configuration file.
#[derive(Debug, Deserialize)]
struct Condition {
    name: Option<String>,
    /// Detector segments.
    segments: Option<PathBuf>,
    /// Cut-point segments; alternatively `audio_dir` with `<rec_id>.wav`
    /// files to run the energy VAD on.
    boundaries: Option<PathBuf>,
    audio_dir: Option<PathBuf>,
    reference: Option<PathBuf>,
    hypothesis: Option<PathBuf>,
    #[serde(default = "default_true")]
    cap: bool,
    max_dur: Option<f64>,
}

fn default_true() -> bool {
    true
}

struct Outcome {
    segments: Vec<Segment>,
    stats: DurationStats,
    wer: crate::scoring::ErrorCounts,
}

fn required<'a, T>(v: &'a Option<T>, key: &str) -> Result<&'a T> {
    v.as_ref()
        .ok_or_else(|| Error::invalid(format!("missing `{key}` entry")))
}

fn vad_boundaries(ctx: &mut Context, dir: &Path, segments: &[Segment]) -> Result<Vec<Segment>> {
    let mut recs: Vec<&str> = segments.iter().map(|s| s.rec_id.as_str()).collect();
    recs.sort_unstable();
    recs.dedup();
    let mut out = Vec::new();
    for rec in recs {
        let bytes = ctx.read_bytes(&dir.join(format!("{rec}.wav")))?;
        out.extend(energy_vad(&parse_wav(&bytes)?, rec, &VadParams::default())?);
    }
    Ok(out)
}

fn run_condition(ctx: &mut Context, base: &Path, c: &Condition) -> Result<Outcome> {
    let seg_path = base.join(required(&c.segments, "segments")?);
    let ref_path = base.join(required(&c.reference, "reference")?);
    let hyp_path = base.join(required(&c.hypothesis, "hypothesis")?);
    let mut segments = load_segments(ctx, &seg_path)?;
    if c.cap {
        let bounds = match (&c.boundaries, &c.audio_dir) {
            (Some(b), _) => load_segments(ctx, &base.join(b))?,
            (None, Some(dir)) => vad_boundaries(ctx, &base.join(dir), &segments)?,
            (None, None) => {
                return Err(Error::invalid("missing `boundaries` or `audio_dir` entry"))
            }
        };
        segments = cap_segments(&segments, &bounds, c.max_dur.unwrap_or(DEFAULT_MAX_DUR_S))?;
    }
    let stats = duration_stats(&segments)?;
    let refs = load_transcripts(ctx, &ref_path)?;
    let hyps = load_transcripts(ctx, &hyp_path)?;
    let pairs = pair_by_id(&refs, &hyps, &hyp_path.display().to_string())?;
    let token_pairs: Vec<(&[Token], &[Token])> = pairs
        .iter()
        .map(|(r, h)| (r.tokens.as_slice(), h.tokens.as_slice()))
        .collect();
    Ok(Outcome {
        segments,
        stats,
        wer: wer(&token_pairs)?,
    })
}

fn tsv_row(name: &str, o: &Outcome) -> String {
    let s = &o.stats;
    format!(
        "{name}\t{}\t{:.1}\t{:.1}\t{:.1}\t{:.2}\t{:.2}\t{:.2}-{:.2}\t{}\n",
        s.count,
        s.buckets[0].percent,
        s.buckets[1].percent,
        s.buckets[2].percent,
        s.mean_s,
        s.std_s,
        s.effective_range[0],
        s.effective_range[1],
        o.wer
            .rate()
            .map_or("-".to_string(), |r| format!("{:.1}", round_rate(r))),
    )
}

pub(super) fn pipeline_bench(a: &PipelineBenchArgs, ctx: &mut Context) -> CliResult<Value> {
    let origin = a.config.display().to_string();
    let text = ctx.read_text(&a.config)?;
    let config: BenchConfig = toml::from_str(&text).map_err(|e| {
        let line = e
            .span()
            .map_or(0, |s| text[..s.start].lines().count().max(1));
        Error::format(
            &origin,
            line,
            format!("a benchmark configuration ({})", e.message()),
        )
    })?;
    if config.condition.is_empty() {
        return Err(Failure::Usage(format!(
            "{origin}: no [[condition]] entries"
        )));
    }
    let base = a.config.parent().unwrap_or(Path::new("")).to_path_buf();
    let mut rows = Vec::new();
    let mut tsv = String::from(
        "condition\tsegments\t0-15%\t15-30%\t30+%\tmean_s\tstd_s\teffective_range_s\twer%\n",
    );
    for (i, c) in config.condition.iter().enumerate() {
        let name = c
            .name
            .clone()
            .unwrap_or_else(|| format!("condition-{}", i + 1));
        match run_condition(ctx, &base, c) {
            Ok(o) => {
                tsv.push_str(&tsv_row(&name, &o));
                rows.push(json!({
                    "condition": name,
                    "status": "ok",
                    "capped": c.cap,
                    "segments": o.segments.len(),
                    "durations": o.stats,
                    "wer": {
                        "sub": o.wer.sub,
                        "del": o.wer.del,
                        "ins": o.wer.ins,
                        "ref_len": o.wer.ref_len,
                        "percent": o.wer.rate().map(round_rate),
                    },
                }));
            }
            Err(e) => {
                tsv.push_str(&format!("{name}\terror\t\t\t\t\t\t\t\n"));
                rows.push(json!({ "condition": name, "status": "error", "error": e.to_string() }));
            }
        }
    }
    if let Some(path) = &a.tsv {
        write_atomic(path, tsv.as_bytes())?;
    }
    let failed = rows.iter().filter(|r| r["status"] == "error").count();
    Ok(json!({ "conditions": rows, "failed": failed }))
}
