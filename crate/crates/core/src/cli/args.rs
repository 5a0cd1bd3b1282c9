use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "asrbench",
    version,
    about = "Speech recognition benchmarking and decoding toolkit"
)]
pub struct Cli {
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: Option<u16>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Fold, clean and filter transcripts.
    Normalize(NormalizeArgs),
    /// Transliterate between Arabic script and Buckwalter.
    Bw(BwArgs),
    /// Apply global mapping rules to transcripts.
    Glm(GlmArgs),
    /// Split transcripts into overlapping fixed-size chunks.
    Chunk(ChunkArgs),
    /// Learn BPE merges from a transcript file.
    BpeTrain(BpeTrainArgs),
    /// Segment transcript words into BPE subwords.
    BpeApply(BpeApplyArgs),
    /// Single-reference WER with error tables.
    Score(ScoreArgs),
    /// Multi-reference and averaged WER.
    MrScore(MrScoreArgs),
    /// Inter-annotator disagreement gap.
    Gap(GapArgs),
    /// Most frequent substitutions, insertions and deletions.
    Errors(ErrorsArgs),
    /// Pairwise disagreement matrix between transcript sets.
    Matrix(MatrixArgs),
    /// Energy-based voice activity detection on a WAV file.
    Vad(VadArgs),
    /// Split long segments at silence boundaries.
    Cap(CapArgs),
    /// Segment duration histogram and effective range.
    Durstats(DurstatsArgs),
    /// Joint CTC beam search over a posterior file.
    Decode(DecodeArgs),
    /// Train an add-k n-gram language model.
    LmTrain(LmTrainArgs),
    /// Perplexity of transcripts under an n-gram model.
    Ppl(PplArgs),
    /// Numerical self-checks of the attention kernels.
    KernelsCheck(KernelsCheckArgs),
    /// Cap, duration statistics and scoring for several conditions.
    PipelineBench(PipelineBenchArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Normalize(_) => "normalize",
            Command::Bw(_) => "bw",
            Command::Glm(_) => "glm",
            Command::Chunk(_) => "chunk",
            Command::BpeTrain(_) => "bpe-train",
            Command::BpeApply(_) => "bpe-apply",
            Command::Score(_) => "score",
            Command::MrScore(_) => "mr-score",
            Command::Gap(_) => "gap",
            Command::Errors(_) => "errors",
            Command::Matrix(_) => "matrix",
            Command::Vad(_) => "vad",
            Command::Cap(_) => "cap",
            Command::Durstats(_) => "durstats",
            Command::Decode(_) => "decode",
            Command::LmTrain(_) => "lm-train",
            Command::Ppl(_) => "ppl",
            Command::KernelsCheck(_) => "kernels-check",
            Command::PipelineBench(_) => "pipeline-bench",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyPreset {
    /// Folds and all cleaning steps.
    Full,
    /// Alif, ya and ta-marbuta folds only.
    Folds,
    /// Leave tokens untouched.
    None,
}

/// Optional text preparation shared by the scoring commands.
#[derive(Debug, Args, Serialize)]
pub struct Prep {
    /// Global mapping rules applied to both sides.
    #[arg(long)]
    pub glm: Option<PathBuf>,
    /// Normalization applied to both sides before the rules.
    #[arg(long, value_enum, default_value = "none")]
    pub normalize: PolicyPreset,
}

#[derive(Debug, Args, Serialize)]
pub struct NormalizeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "full")]
    pub policy: PolicyPreset,
    #[arg(long)]
    pub no_fold_alif: bool,
    #[arg(long)]
    pub no_fold_ya: bool,
    #[arg(long)]
    pub no_fold_ta_marbuta: bool,
    #[arg(long)]
    pub keep_diacritics: bool,
    #[arg(long)]
    pub keep_punctuation: bool,
    #[arg(long)]
    pub keep_single_char: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    ToBw,
    ToArabic,
}

#[derive(Debug, Args, Serialize)]
pub struct BwArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "to-bw")]
    pub direction: Direction,
}

#[derive(Debug, Args, Serialize)]
pub struct GlmArgs {
    #[arg(long)]
    pub rules: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ChunkArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = crate::text::chunk::DEFAULT_MAX_LEN)]
    pub max_len: usize,
    #[arg(long, default_value_t = crate::text::chunk::DEFAULT_OVERLAP)]
    pub overlap: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct BpeTrainArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub merges: usize,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct BpeApplyArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ScoreArgs {
    #[arg(long = "ref")]
    pub reference: PathBuf,
    #[arg(long)]
    pub hyp: PathBuf,
    #[command(flatten)]
    pub prep: Prep,
    /// Rows per error table.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct MrScoreArgs {
    /// Reference files, one per annotator.
    #[arg(long = "ref", required = true, num_args = 1..)]
    pub refs: Vec<PathBuf>,
    #[arg(long)]
    pub hyp: PathBuf,
    #[command(flatten)]
    pub prep: Prep,
}

#[derive(Debug, Args, Serialize)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["values", "a"])))]
pub struct GapArgs {
    /// JSON object with `a_to_b` and `b_to_b` disagreement values.
    #[arg(long)]
    pub values: Option<PathBuf>,
    /// Transcripts of the annotator compared against the group.
    #[arg(long, requires = "b")]
    pub a: Option<PathBuf>,
    /// Transcripts of each group member.
    #[arg(long, num_args = 1..)]
    pub b: Vec<PathBuf>,
    #[command(flatten)]
    pub prep: Prep,
}

#[derive(Debug, Args, Serialize)]
pub struct ErrorsArgs {
    #[arg(long = "ref")]
    pub reference: PathBuf,
    #[arg(long)]
    pub hyp: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    #[command(flatten)]
    pub prep: Prep,
    #[arg(long)]
    pub tsv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct MatrixArgs {
    /// `label=path` pairs, in matrix order.
    #[arg(long = "set", required = true, num_args = 1.., value_parser = parse_labelled)]
    pub sets: Vec<(String, PathBuf)>,
    #[command(flatten)]
    pub prep: Prep,
    #[arg(long)]
    pub tsv: Option<PathBuf>,
}

fn parse_labelled(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((label, path)) if !label.is_empty() && !path.is_empty() => {
            Ok((label.to_string(), path.into()))
        }
        _ => Err(format!("expected LABEL=PATH, got {s:?}")),
    }
}

#[derive(Debug, Args, Serialize)]
pub struct VadArgs {
    #[arg(long)]
    pub wav: PathBuf,
    /// Recording id for the output (default: file stem).
    #[arg(long)]
    pub rec_id: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 25.0)]
    pub frame_ms: f64,
    #[arg(long, default_value_t = 10.0)]
    pub hop_ms: f64,
    #[arg(long, default_value_t = 0.3)]
    pub percentile: f64,
    #[arg(long, default_value_t = 6.0)]
    pub margin_db: f64,
    #[arg(long, default_value_t = 5)]
    pub smoothing: usize,
    #[arg(long, default_value_t = 0.3)]
    pub min_silence: f64,
    #[arg(long, default_value_t = 0.2)]
    pub min_speech: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct CapArgs {
    /// Detector segments to cap.
    #[arg(long)]
    pub segments: PathBuf,
    /// Segments whose gaps are admissible cut points.
    #[arg(long)]
    pub boundaries: PathBuf,
    #[arg(long, default_value_t = crate::segment::DEFAULT_MAX_DUR_S)]
    pub max_dur: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DurstatsArgs {
    #[arg(long)]
    pub segments: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct DecodeArgs {
    #[arg(long)]
    pub post: PathBuf,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub beam: u32,
    /// CTC/decoder trade-off.
    #[arg(long, default_value_t = 0.5)]
    pub lam: f64,
    /// Language model weight.
    #[arg(long, default_value_t = 0.3)]
    pub mu: f64,
    /// Add-k n-gram model over the posterior symbols.
    #[arg(long)]
    pub lm: Option<PathBuf>,
    /// First-order decoder score table.
    #[arg(long)]
    pub dec: Option<PathBuf>,
    /// Longest hypothesis (default: number of frames).
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long)]
    pub length_norm: bool,
    /// Hypotheses to report.
    #[arg(long, default_value_t = 5)]
    pub nbest: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct LmTrainArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct PplArgs {
    #[arg(long)]
    pub lm: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct KernelsCheckArgs {
    #[arg(long, default_value_t = 100)]
    pub cases: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct PipelineBenchArgs {
    /// TOML file with one `[[condition]]` table per condition.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub tsv: Option<PathBuf>,
}
