use std::collections::HashMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::args::*;
use super::{bench, write_atomic, CliResult, Context, Failure};
use crate::decode::{
    ctc_greedy, joint_beam_search, lm_train, nbest_json, perplexity, BeamConfig, MarkovTable,
    NgramLm, PosteriorMatrix,
};
use crate::error::{Error, Result};
use crate::kernels::{
    attention_weights, positional_encoding, self_attention, CombineConfig, Matrix,
};
use crate::scoring::disagreement::disagreement;
use crate::scoring::{
    align, av_wer, disagreement_matrix, gap, mr_wer, round_rate, top_errors, wer, AlignmentOps,
    ErrorCounts,
};
use crate::segment::wav::parse_wav;
use crate::segment::{
    cap_segments, duration_stats, energy_vad, format_segments, parse_segments, Segment, VadParams,
};
use crate::text::{
    arabic_to_bw, bpe_train, bw_to_arabic, chunk_text, format_transcripts, normalize,
    parse_transcripts, BpeModel, GlmRules, NormalizationPolicy, Token, Transcript,
};

pub(super) fn dispatch(command: &Command, ctx: &mut Context) -> CliResult<Value> {
    Ok(match command {
        Command::Normalize(a) => normalize_cmd(a, ctx)?,
        Command::Bw(a) => bw_cmd(a, ctx)?,
        Command::Glm(a) => glm_cmd(a, ctx)?,
        Command::Chunk(a) => chunk_cmd(a, ctx)?,
        Command::BpeTrain(a) => bpe_train_cmd(a, ctx)?,
        Command::BpeApply(a) => bpe_apply_cmd(a, ctx)?,
        Command::Score(a) => score_cmd(a, ctx)?,
        Command::MrScore(a) => mr_score_cmd(a, ctx)?,
        Command::Gap(a) => gap_cmd(a, ctx)?,
        Command::Errors(a) => errors_cmd(a, ctx)?,
        Command::Matrix(a) => matrix_cmd(a, ctx)?,
        Command::Vad(a) => vad_cmd(a, ctx)?,
        Command::Cap(a) => cap_cmd(a, ctx)?,
        Command::Durstats(a) => durstats_cmd(a, ctx)?,
        Command::Decode(a) => decode_cmd(a, ctx)?,
        Command::LmTrain(a) => lm_train_cmd(a, ctx)?,
        Command::Ppl(a) => ppl_cmd(a, ctx)?,
        Command::KernelsCheck(a) => kernels_check_cmd(a)?,
        Command::PipelineBench(a) => bench::pipeline_bench(a, ctx)?,
    })
}

fn origin(path: &Path) -> String {
    path.display().to_string()
}

pub(super) fn load_transcripts(ctx: &mut Context, path: &Path) -> Result<Vec<Transcript>> {
    parse_transcripts(&ctx.read_text(path)?, &origin(path))
}

pub(super) fn load_segments(ctx: &mut Context, path: &Path) -> Result<Vec<Segment>> {
    parse_segments(&ctx.read_text(path)?, &origin(path))
}

fn preset(p: PolicyPreset) -> NormalizationPolicy {
    match p {
        PolicyPreset::Full => NormalizationPolicy::default(),
        PolicyPreset::Folds => NormalizationPolicy::folds_only(),
        PolicyPreset::None => NormalizationPolicy::none(),
    }
}

/// Normalization then GLM rewriting, as configured by `--normalize`/`--glm`.
pub(super) struct Preparer {
    policy: NormalizationPolicy,
    rules: Option<GlmRules>,
}

impl Preparer {
    pub(super) fn load(prep: &Prep, ctx: &mut Context) -> Result<Self> {
        let rules = match &prep.glm {
            Some(p) => Some(GlmRules::parse(&ctx.read_text(p)?, &origin(p))?),
            None => None,
        };
        Ok(Preparer {
            policy: preset(prep.normalize),
            rules,
        })
    }

    pub(super) fn apply(&self, ts: Vec<Transcript>) -> Vec<Transcript> {
        ts.into_iter()
            .map(|t| {
                let t = if self.policy == NormalizationPolicy::none() {
                    t
                } else {
                    normalize(&t, &self.policy)
                };
                match &self.rules {
                    Some(r) => r.apply(&t),
                    None => t,
                }
            })
            .collect()
    }

    pub(super) fn load_file(&self, ctx: &mut Context, path: &Path) -> Result<Vec<Transcript>> {
        Ok(self.apply(load_transcripts(ctx, path)?))
    }
}

/// Hypotheses in reference order; every reference id needs a hypothesis and
/// vice versa.
pub(super) fn pair_by_id<'a>(
    refs: &'a [Transcript],
    hyps: &'a [Transcript],
    hyp_name: &str,
) -> Result<Vec<(&'a Transcript, &'a Transcript)>> {
    let by_id: HashMap<&str, &Transcript> = hyps.iter().map(|t| (t.utt_id.as_str(), t)).collect();
    if hyps.len() != refs.len() {
        let ref_ids: std::collections::HashSet<&str> =
            refs.iter().map(|t| t.utt_id.as_str()).collect();
        if let Some(extra) = hyps.iter().find(|h| !ref_ids.contains(h.utt_id.as_str())) {
            return Err(Error::invalid(format!(
                "{hyp_name}: utterance {} has no reference",
                extra.utt_id
            )));
        }
    }
    refs.iter()
        .map(|r| {
            by_id
                .get(r.utt_id.as_str())
                .map(|&h| (r, h))
                .ok_or_else(|| {
                    Error::invalid(format!(
                        "{hyp_name}: no hypothesis for utterance {}",
                        r.utt_id
                    ))
                })
        })
        .collect()
}

fn counts_json(c: &ErrorCounts) -> Value {
    json!({
        "sub": c.sub,
        "del": c.del,
        "ins": c.ins,
        "errors": c.errors(),
        "ref_len": c.ref_len,
    })
}

fn rate_json(c: &ErrorCounts) -> Value {
    match c.rate() {
        Some(r) => json!({ "percent": round_rate(r), "exact": r }),
        None => Value::Null,
    }
}

fn write_transcripts(path: &Path, ts: &[Transcript]) -> Result<()> {
    write_atomic(path, format_transcripts(ts).as_bytes())
}

fn token_count(ts: &[Transcript]) -> usize {
    ts.iter().map(Transcript::len).sum()
}

fn normalize_cmd(a: &NormalizeArgs, ctx: &mut Context) -> Result<Value> {
    let mut policy = preset(a.policy);
    policy.fold_alif &= !a.no_fold_alif;
    policy.fold_ya &= !a.no_fold_ya;
    policy.fold_ta_marbuta &= !a.no_fold_ta_marbuta;
    policy.strip_diacritics &= !a.keep_diacritics;
    policy.strip_punctuation &= !a.keep_punctuation;
    policy.drop_single_char_words &= !a.keep_single_char;
    let input = load_transcripts(ctx, &a.input)?;
    let out: Vec<Transcript> = input.par_iter().map(|t| normalize(t, &policy)).collect();
    write_transcripts(&a.output, &out)?;
    Ok(json!({
        "policy": policy,
        "utterances": out.len(),
        "tokens_in": token_count(&input),
        "tokens_out": token_count(&out),
    }))
}

fn bw_cmd(a: &BwArgs, ctx: &mut Context) -> Result<Value> {
    let input = load_transcripts(ctx, &a.input)?;
    let f = match a.direction {
        Direction::ToBw => arabic_to_bw,
        Direction::ToArabic => bw_to_arabic,
    };
    let out: Vec<Transcript> = input.iter().map(|t| t.map_tokens(f)).collect();
    write_transcripts(&a.output, &out)?;
    Ok(json!({ "utterances": out.len(), "tokens": token_count(&out) }))
}

fn glm_cmd(a: &GlmArgs, ctx: &mut Context) -> Result<Value> {
    let rules = GlmRules::parse(&ctx.read_text(&a.rules)?, &origin(&a.rules))?;
    let input = load_transcripts(ctx, &a.input)?;
    let out: Vec<Transcript> = input.iter().map(|t| rules.apply(t)).collect();
    let changed = input.iter().zip(&out).filter(|(i, o)| i != o).count();
    write_transcripts(&a.output, &out)?;
    Ok(json!({
        "rules": rules.rules().len(),
        "utterances": out.len(),
        "utterances_changed": changed,
        "tokens_in": token_count(&input),
        "tokens_out": token_count(&out),
    }))
}

fn chunk_cmd(a: &ChunkArgs, ctx: &mut Context) -> Result<Value> {
    let input = load_transcripts(ctx, &a.input)?;
    let mut out = Vec::new();
    let mut per_utt = Vec::new();
    for t in &input {
        let chunks = chunk_text(&t.tokens, a.max_len, a.overlap)?;
        per_utt.push(json!({ "utt_id": t.utt_id, "tokens": t.len(), "chunks": chunks.len() }));
        for (i, c) in chunks.iter().enumerate() {
            out.push(Transcript::new(format!("{}-c{i:04}", t.utt_id), c.to_vec()));
        }
    }
    write_transcripts(&a.output, &out)?;
    Ok(json!({
        "max_len": a.max_len,
        "overlap": a.overlap,
        "chunks": out.len(),
        "utterances": per_utt,
    }))
}

fn bpe_train_cmd(a: &BpeTrainArgs, ctx: &mut Context) -> Result<Value> {
    let corpus = load_transcripts(ctx, &a.input)?;
    let model = bpe_train(&corpus, a.merges);
    write_atomic(&a.output, model.to_text().as_bytes())?;
    Ok(json!({
        "requested_merges": a.merges,
        "merges": model.merges().len(),
        "base_symbols": model.base_symbols().len(),
    }))
}

/// Subword continuation marker on every piece but the last of a word.
const CONTINUATION: &str = "@@";

fn bpe_apply_cmd(a: &BpeApplyArgs, ctx: &mut Context) -> Result<Value> {
    let model = BpeModel::parse(&ctx.read_text(&a.model)?, &origin(&a.model))?;
    let input = load_transcripts(ctx, &a.input)?;
    let out: Vec<Transcript> = input
        .par_iter()
        .map(|t| {
            t.map_tokens(|w| {
                let pieces = model.encode(w);
                let last = pieces.len() - 1;
                pieces
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        if i < last {
                            format!("{p}{CONTINUATION}")
                        } else {
                            p.clone()
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
        })
        .collect();
    write_transcripts(&a.output, &out)?;
    Ok(json!({
        "utterances": out.len(),
        "words": token_count(&input),
        "subwords": token_count(&out),
    }))
}

fn align_all(pairs: &[(&Transcript, &Transcript)]) -> Vec<AlignmentOps> {
    pairs
        .par_iter()
        .map(|(r, h)| align(&r.tokens, &h.tokens))
        .collect()
}

fn score_cmd(a: &ScoreArgs, ctx: &mut Context) -> Result<Value> {
    let prep = Preparer::load(&a.prep, ctx)?;
    let refs = prep.load_file(ctx, &a.reference)?;
    let hyps = prep.load_file(ctx, &a.hyp)?;
    let pairs = pair_by_id(&refs, &hyps, &origin(&a.hyp))?;
    let token_pairs: Vec<(&[Token], &[Token])> = pairs
        .iter()
        .map(|(r, h)| (r.tokens.as_slice(), h.tokens.as_slice()))
        .collect();
    let total = wer(&token_pairs)?;
    let alignments = align_all(&pairs);
    let utterances: Vec<Value> = pairs
        .iter()
        .zip(&alignments)
        .map(|((r, _), ops)| {
            let c = ops.counts();
            json!({ "utt_id": r.utt_id, "counts": counts_json(&c), "ops": ops })
        })
        .collect();
    let tables = top_errors(&alignments, a.top)?;
    Ok(json!({
        "utterances": pairs.len(),
        "counts": counts_json(&total),
        "wer": rate_json(&total),
        "tables": tables,
        "details": utterances,
    }))
}

fn mr_score_cmd(a: &MrScoreArgs, ctx: &mut Context) -> Result<Value> {
    let prep = Preparer::load(&a.prep, ctx)?;
    let hyps = prep.load_file(ctx, &a.hyp)?;
    let first = prep.load_file(ctx, &a.refs[0])?;
    let mut ref_files = vec![first];
    for p in &a.refs[1..] {
        ref_files.push(prep.load_file(ctx, p)?);
    }
    let anchor = &ref_files[0];
    let hyp_pairs = pair_by_id(anchor, &hyps, &origin(&a.hyp))?;
    let mut ref_sets: Vec<Vec<&[Token]>> =
        anchor.iter().map(|r| vec![r.tokens.as_slice()]).collect();
    for (file, path) in ref_files.iter().zip(&a.refs).skip(1) {
        let matched = pair_by_id(anchor, file, &origin(path))?;
        for (set, (_, other)) in ref_sets.iter_mut().zip(matched) {
            set.push(other.tokens.as_slice());
        }
    }
    let hyp_tokens: Vec<&[Token]> = hyp_pairs.iter().map(|(_, h)| h.tokens.as_slice()).collect();
    let mr = mr_wer(&ref_sets, &hyp_tokens)?;
    let av = av_wer(&ref_sets, &hyp_tokens)?;
    let mut single = Vec::new();
    for (k, path) in a.refs.iter().enumerate() {
        let pairs: Vec<(&[Token], &[Token])> = ref_sets
            .iter()
            .zip(&hyp_tokens)
            .map(|(s, h)| (s[k], *h))
            .collect();
        let c = wer(&pairs)?;
        single.push(
            json!({ "reference": origin(path), "counts": counts_json(&c), "wer": rate_json(&c) }),
        );
    }
    Ok(json!({
        "utterances": ref_sets.len(),
        "references": a.refs.len(),
        "mr_counts": counts_json(&mr),
        "mr_wer": rate_json(&mr),
        "av_wer": { "percent": round_rate(av), "exact": av },
        "single": single,
    }))
}

#[derive(serde::Deserialize)]
struct GapValues {
    a_to_b: Vec<f64>,
    b_to_b: Vec<Vec<f64>>,
}

fn gap_cmd(a: &GapArgs, ctx: &mut Context) -> CliResult<Value> {
    let (a_to_b, b_to_b) = match (&a.values, &a.a) {
        (Some(path), None) => {
            if !a.b.is_empty() {
                return Err(Failure::Usage(
                    "--values cannot be combined with --b".into(),
                ));
            }
            let text = ctx.read_text(path)?;
            let v: GapValues = serde_json::from_str(&text).map_err(|e| {
                Error::format(
                    origin(path),
                    e.line(),
                    "a JSON object with `a_to_b` and `b_to_b` arrays",
                )
            })?;
            (v.a_to_b, v.b_to_b)
        }
        (None, Some(a_path)) => {
            let prep = Preparer::load(&a.prep, ctx)?;
            let a_set = prep.load_file(ctx, a_path)?;
            let mut group = Vec::new();
            for p in &a.b {
                group.push((origin(p), prep.load_file(ctx, p)?));
            }
            let a_to_b = group
                .iter()
                .map(|(_, b)| disagreement(&a_set, b))
                .collect::<Result<Vec<_>>>()?;
            (a_to_b, disagreement_matrix(&group)?.cells)
        }
        _ => {
            return Err(Failure::Usage(
                "give either --values or --a with --b".into(),
            ))
        }
    };
    let g = gap(&a_to_b, &b_to_b)?;
    Ok(json!({ "a_to_b": a_to_b, "b_to_b": b_to_b, "gap": g }))
}

fn errors_cmd(a: &ErrorsArgs, ctx: &mut Context) -> Result<Value> {
    let prep = Preparer::load(&a.prep, ctx)?;
    let refs = prep.load_file(ctx, &a.reference)?;
    let hyps = prep.load_file(ctx, &a.hyp)?;
    let pairs = pair_by_id(&refs, &hyps, &origin(&a.hyp))?;
    let alignments = align_all(&pairs);
    let tables = top_errors(&alignments, a.top)?;
    if let Some(tsv) = &a.tsv {
        write_atomic(tsv, tables.to_tsv().as_bytes())?;
    }
    let total: ErrorCounts = alignments.iter().map(AlignmentOps::counts).sum();
    Ok(json!({
        "counts": counts_json(&total),
        "substitutions": tables.substitutions.iter().map(|e| e.line()).collect::<Vec<_>>(),
        "insertions": tables.insertions.iter().map(|e| e.line()).collect::<Vec<_>>(),
        "deletions": tables.deletions.iter().map(|e| e.line()).collect::<Vec<_>>(),
        "tables": tables,
    }))
}

fn matrix_cmd(a: &MatrixArgs, ctx: &mut Context) -> Result<Value> {
    let prep = Preparer::load(&a.prep, ctx)?;
    let mut sets = Vec::new();
    for (label, path) in &a.sets {
        sets.push((label.clone(), prep.load_file(ctx, path)?));
    }
    let m = disagreement_matrix(&sets)?;
    if let Some(tsv) = &a.tsv {
        write_atomic(tsv, m.to_tsv().as_bytes())?;
    }
    Ok(serde_json::to_value(&m).expect("matrix serializes"))
}

fn vad_cmd(a: &VadArgs, ctx: &mut Context) -> Result<Value> {
    let bytes = ctx.read_bytes(&a.wav)?;
    let audio = parse_wav(&bytes)?;
    let rec_id = match &a.rec_id {
        Some(r) => r.clone(),
        None => a
            .wav
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .filter(|s| !s.is_empty() && !s.contains(char::is_whitespace))
            .ok_or_else(|| {
                Error::invalid("cannot derive a recording id from the file name; pass --rec-id")
            })?,
    };
    let params = VadParams {
        frame_ms: a.frame_ms,
        hop_ms: a.hop_ms,
        threshold_percentile: a.percentile,
        margin_db: a.margin_db,
        smoothing_frames: a.smoothing,
        min_silence_s: a.min_silence,
        min_speech_s: a.min_speech,
        ..VadParams::default()
    };
    let segs = energy_vad(&audio, &rec_id, &params)?;
    if let Some(out) = &a.output {
        write_atomic(out, format_segments(&segs).as_bytes())?;
    }
    Ok(json!({
        "rec_id": rec_id,
        "duration_s": audio.duration_s(),
        "sample_rate": audio.sample_rate,
        "params": params,
        "segments": segs,
    }))
}

fn cap_cmd(a: &CapArgs, ctx: &mut Context) -> Result<Value> {
    let primary = load_segments(ctx, &a.segments)?;
    let bounds = load_segments(ctx, &a.boundaries)?;
    let capped = cap_segments(&primary, &bounds, a.max_dur)?;
    if let Some(out) = &a.output {
        write_atomic(out, format_segments(&capped).as_bytes())?;
    }
    Ok(json!({
        "max_dur_s": a.max_dur,
        "segments_in": primary.len(),
        "segments_out": capped.len(),
        "segments": capped,
    }))
}

fn durstats_cmd(a: &DurstatsArgs, ctx: &mut Context) -> Result<Value> {
    let segs = load_segments(ctx, &a.segments)?;
    Ok(serde_json::to_value(duration_stats(&segs)?).expect("stats serialize"))
}

fn decode_cmd(a: &DecodeArgs, ctx: &mut Context) -> Result<Value> {
    let (post, vocab) = PosteriorMatrix::parse(&ctx.read_text(&a.post)?, &origin(&a.post))?;
    let lm = match &a.lm {
        Some(p) => Some(NgramLm::parse(&ctx.read_text(p)?, &origin(p))?),
        None => None,
    };
    let dec = match &a.dec {
        Some(p) => {
            let table = MarkovTable::parse(&ctx.read_text(p)?, &origin(p))?;
            if table.vocab_size() != vocab.len() {
                return Err(Error::Dimension(format!(
                    "{}: table covers {} symbols, posterior has {}",
                    origin(p),
                    table.vocab_size(),
                    vocab.len()
                )));
            }
            Some(table)
        }
        None => None,
    };
    let weights = CombineConfig {
        lambda: a.lam,
        mu: a.mu,
        ..CombineConfig::default()
    };
    let mut cfg = BeamConfig::new(a.beam as usize, a.max_len.unwrap_or(post.frames()), weights);
    cfg.length_norm = a.length_norm;
    let lm_scorer = lm.as_ref().map(|m| m.scorer(&vocab));
    let hyps = joint_beam_search(&post, &vocab, &cfg, dec.as_ref(), lm_scorer.as_ref())?;
    let shown = &hyps[..hyps.len().min(a.nbest)];
    let greedy = ctc_greedy(&post, &vocab);
    Ok(json!({
        "frames": post.frames(),
        "vocab": vocab.symbols(),
        "lambda": if dec.is_some() { a.lam } else { 1.0 },
        "mu": if lm.is_some() { a.mu } else { 0.0 },
        "greedy": vocab.render(&greedy),
        "nbest": nbest_json(shown, &vocab),
    }))
}

fn lm_train_cmd(a: &LmTrainArgs, ctx: &mut Context) -> Result<Value> {
    let corpus = load_transcripts(ctx, &a.input)?;
    let lm = lm_train(&corpus, a.order, a.k)?;
    write_atomic(&a.output, lm.to_text().as_bytes())?;
    Ok(json!({
        "order": lm.order(),
        "k": lm.k(),
        "vocab_size": lm.vocab_size(),
        "train_perplexity": perplexity(&lm, &corpus)?,
    }))
}

fn ppl_cmd(a: &PplArgs, ctx: &mut Context) -> Result<Value> {
    let lm = NgramLm::parse(&ctx.read_text(&a.lm)?, &origin(&a.lm))?;
    let text = load_transcripts(ctx, &a.input)?;
    let events: usize = text.iter().map(|t| t.len() + 1).sum();
    Ok(json!({
        "order": lm.order(),
        "utterances": text.len(),
        "events": events,
        "perplexity": perplexity(&lm, &text)?,
    }))
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(-3.0..3.0)).collect();
    Matrix::new(rows, cols, data).expect("finite entries")
}

/// Scaled dot-product attention written out element by element.
fn naive_attention(q: &Matrix, k: &Matrix, v: &Matrix) -> Vec<f64> {
    let scale = (q.cols() as f64).sqrt();
    let mut out = vec![0.0; q.rows() * v.cols()];
    for i in 0..q.rows() {
        let logits: Vec<f64> = (0..k.rows())
            .map(|j| {
                (0..q.cols())
                    .map(|c| q.get(i, c) * k.get(j, c))
                    .sum::<f64>()
                    / scale
            })
            .collect();
        let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let e: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
        let z: f64 = e.iter().sum();
        for c in 0..v.cols() {
            out[i * v.cols() + c] = (0..k.rows()).map(|j| e[j] / z * v.get(j, c)).sum();
        }
    }
    out
}

fn kernels_check_cmd(a: &KernelsCheckArgs) -> Result<Value> {
    const TOL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let (mut softmax_dev, mut attention_dev) = (0.0f64, 0.0f64);
    for _ in 0..a.cases {
        let (n, m, d, dv) = (
            rng.gen_range(1..8),
            rng.gen_range(1..8),
            rng.gen_range(1..6),
            rng.gen_range(1..6),
        );
        let q = random_matrix(&mut rng, n, d);
        let k = random_matrix(&mut rng, m, d);
        let v = random_matrix(&mut rng, m, dv);
        let w = attention_weights(&q, &k)?;
        for r in 0..w.rows() {
            softmax_dev = softmax_dev.max((w.row(r).iter().sum::<f64>() - 1.0).abs());
        }
        let z = self_attention(&q, &k, &v)?;
        for (x, y) in z.data().iter().zip(naive_attention(&q, &k, &v)) {
            attention_dev = attention_dev.max((x - y).abs());
        }
    }
    let pe = positional_encoding(64, 16)?;
    let mut pe_dev = 0.0f64;
    for p in 0..pe.rows() {
        for i in (0..pe.cols()).step_by(2) {
            pe_dev = pe_dev.max((pe.get(p, i).powi(2) + pe.get(p, i + 1).powi(2) - 1.0).abs());
        }
    }
    for i in 0..pe.cols() {
        pe_dev = pe_dev.max((pe.get(0, i) - (i % 2) as f64).abs());
    }
    let check = |dev: f64| json!({ "max_deviation": dev, "pass": dev <= TOL });
    Ok(json!({
        "cases": a.cases,
        "seed": a.seed,
        "tolerance": TOL,
        "softmax_rows": check(softmax_dev),
        "self_attention_vs_scalar": check(attention_dev),
        "positional_encoding": check(pe_dev),
    }))
}
