//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any fails.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use asrbench::decode::{ctc_log_prob, joint_beam_search, lm_train, BeamConfig, MarkovTable};
use asrbench::kernels::{
    attention_weights, positional_encoding, self_attention, CombineConfig, Matrix,
};
use asrbench::scoring::{align, gap, mr_wer, wer};
use asrbench::segment::wav::AudioBuffer;
use asrbench::segment::{cap_segments, duration_stats, energy_vad, Segment, VadParams};
use asrbench::text::buckwalter::table_entries;
use asrbench::text::{
    arabic_to_bw, bw_to_arabic, chunk_text, normalize, NormalizationPolicy, Token, Transcript,
};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ctc_completeness() -> Outcome {
    let mut rng = rng(1);
    let mut worst = 0.0f64;
    for case in 0..200 {
        let t = rng.gen_range(1..=4);
        let v = rng.gen_range(2..=3);
        let blank = rng.gen_range(0..v);
        let probs = random_probs(&mut rng, t, v);
        let post = posterior(&probs);
        let voc = vocab(v, blank);
        let labels: Vec<usize> = voc.labels().collect();
        let total: f64 = all_sequences(&labels, t)
            .iter()
            .map(|s| ctc_log_prob(&post, s, &voc).unwrap().exp())
            .sum();
        worst = worst.max((total - 1.0).abs());
        ensure((total - 1.0).abs() <= 1e-9, || {
            format!("case {case}: total probability {total}")
        })?;
    }
    Ok(format!("200 matrices, max |sum - 1| = {worst:.1e}"))
}

fn random_table(rng: &mut ChaCha8Rng, v: usize) -> (MarkovTable, Vec<Vec<f64>>) {
    let rows: Vec<Vec<f64>> = (0..=v)
        .map(|_| {
            let p: Vec<f64> = (0..=v).map(|_| rng.gen_range(0.05..1.0)).collect();
            let z: f64 = p.iter().sum();
            p.iter().map(|x| (x / z).ln()).collect()
        })
        .collect();
    (MarkovTable::new(v, rows.clone()).unwrap(), rows)
}

fn beam_oracle() -> Outcome {
    let mut rng = rng(2);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let t = rng.gen_range(1..=5);
        let v = rng.gen_range(2..=3);
        let max_len = rng.gen_range(1..=4);
        let probs = random_probs(&mut rng, t, v);
        let post = posterior(&probs);
        let voc = vocab(v, 0);
        let labels: Vec<usize> = voc.labels().collect();
        let weights = CombineConfig {
            lambda: rng.gen_range(0.0..=1.0),
            mu: rng.gen_range(0.0..=1.0),
            ..CombineConfig::default()
        };
        let order = rng.gen_range(1..=3);
        let k = rng.gen_range(0.1..2.0);
        let mut corpus: Vec<Vec<String>> = (0..rng.gen_range(1..=4))
            .map(|_| {
                let n = rng.gen_range(0..=4);
                (0..n)
                    .map(|_| {
                        voc.symbol(labels[rng.gen_range(0..labels.len())])
                            .to_string()
                    })
                    .collect()
            })
            .collect();
        corpus[0].push(voc.symbol(labels[0]).to_string());
        let transcripts: Vec<Transcript> = corpus
            .iter()
            .enumerate()
            .map(|(i, w)| Transcript::from_text(format!("u{i}"), &w.join(" ")))
            .collect();
        let lm = lm_train(&transcripts, order, k).unwrap();
        let oracle_lm = AddKOracle::new(&corpus, order, k);
        let (table, table_logp) = random_table(&mut rng, v);

        let paths = ctc_path_sums(&probs, 0);
        let seqs = all_sequences(&labels, max_len);
        let score = |s: &Vec<usize>| {
            let p_ctc = paths.get(s).copied().unwrap_or(0.0);
            if p_ctc == 0.0 {
                return f64::NEG_INFINITY;
            }
            let mut ctx = 0;
            let mut dec = 0.0;
            for &c in s {
                dec += table_logp[ctx][c];
                ctx = c + 1;
            }
            dec += table_logp[ctx][v];
            let words: Vec<String> = s.iter().map(|&c| voc.symbol(c).to_string()).collect();
            weights.lambda * p_ctc.ln()
                + (1.0 - weights.lambda) * dec
                + weights.mu * oracle_lm.sentence_log_prob(&words)
        };
        let best = seqs.iter().map(score).fold(f64::NEG_INFINITY, f64::max);

        let cfg = BeamConfig::new(seqs.len(), max_len, weights);
        let scorer = lm.scorer(&voc);
        let hyps = joint_beam_search(&post, &voc, &cfg, Some(&table), Some(&scorer)).unwrap();
        let top = hyps
            .first()
            .ok_or_else(|| format!("case {case}: empty beam"))?;
        worst = worst.max((top.joint - best).abs());
        ensure((top.joint - best).abs() <= 1e-9, || {
            format!("case {case}: beam {} vs oracle {best}", top.joint)
        })?;
        ensure((score(&top.tokens) - best).abs() <= 1e-9, || {
            format!("case {case}: beam returned {:?}, not an argmax", top.tokens)
        })?;
    }
    Ok(format!("100 instances, max |beam - oracle| = {worst:.1e}"))
}

fn alignment_optimality() -> Outcome {
    let mut rng = rng(3);
    let alphabet = symbols(3);
    for case in 0..500 {
        let r = random_seq(&mut rng, &alphabet, 6);
        let h = random_seq(&mut rng, &alphabet, 6);
        let got = align(&r, &h).cost();
        let want = exhaustive_edit_cost(&r, &h);
        ensure(got == want, || {
            format!("case {case}: align cost {got}, exhaustive {want}")
        })?;
    }
    Ok("500 pairs match exhaustive search".into())
}

fn mr_dominance() -> Outcome {
    let mut rng = rng(4);
    let alphabet = symbols(3);
    let mut strict = 0;
    for case in 0..200 {
        let utts = rng.gen_range(1..=4);
        let refs_per = rng.gen_range(1..=4);
        let identical = case % 4 == 0;
        let mut sets: Vec<Vec<Vec<Token>>> = Vec::new();
        for _ in 0..utts {
            let first = random_seq(&mut rng, &alphabet, 5);
            let set = (0..refs_per)
                .map(|i| {
                    if identical || i == 0 {
                        first.clone()
                    } else {
                        random_seq(&mut rng, &alphabet, 5)
                    }
                })
                .collect();
            sets.push(set);
        }
        sets[0][0].push(alphabet[0].clone());
        if identical {
            let fixed = sets[0][0].clone();
            sets[0].iter_mut().for_each(|r| *r = fixed.clone());
        }
        let hyps: Vec<Vec<Token>> = (0..utts)
            .map(|_| random_seq(&mut rng, &alphabet, 5))
            .collect();
        let Ok(mr) = mr_wer(&sets, &hyps) else {
            continue;
        };
        let singles: Vec<usize> = (0..refs_per)
            .filter_map(|k| {
                let pairs: Vec<(&[Token], &[Token])> = sets
                    .iter()
                    .zip(&hyps)
                    .map(|(s, h)| (s[k].as_slice(), h.as_slice()))
                    .collect();
                wer(&pairs).ok().map(|c| c.errors())
            })
            .collect();
        let min = *singles.iter().min().unwrap();
        ensure(mr.errors() <= min, || {
            format!("case {case}: MR {} > single {min}", mr.errors())
        })?;
        if identical {
            ensure(mr.errors() == min, || {
                format!("case {case}: identical refs, MR {} != {min}", mr.errors())
            })?;
        } else if mr.errors() < min {
            strict += 1;
        }
    }
    Ok(format!(
        "200 cases, {strict} strictly better than every single reference"
    ))
}

fn gap_formula() -> Outcome {
    let g = gap(&[0.2, 0.2], &[vec![0.0, 0.1], vec![0.1, 0.0]]).map_err(|e| e.to_string())?;
    ensure(g == 0.05, || format!("worked example gave {g:?}"))?;
    let z = gap(
        &[0.3, 0.3, 0.3],
        &[
            vec![0.0, 0.3, 0.3],
            vec![0.3, 0.0, 0.3],
            vec![0.3, 0.3, 0.0],
        ],
    )
    .map_err(|e| e.to_string())?;
    ensure(z == 0.0, || format!("all-equal case gave {z:?}"))?;
    Ok("worked example = 0.05, all-equal = 0".into())
}

fn normalization() -> Outcome {
    let mut rng = rng(6);
    let chars: Vec<char> = table_entries().iter().map(|&(bw, _)| bw).collect();
    let policy = NormalizationPolicy::default();
    let words: Vec<String> = (0..1000)
        .map(|_| {
            (0..rng.gen_range(1..=8))
                .map(|_| chars[rng.gen_range(0..chars.len())])
                .collect()
        })
        .collect();
    for (i, w) in words.iter().enumerate() {
        let t = Transcript::new("u", vec![Token::new(w.as_str()).unwrap()]);
        let once = normalize(&t, &policy);
        let twice = normalize(&once, &policy);
        ensure(once == twice, || {
            format!(
                "token {i} {w:?} not idempotent: {} -> {}",
                once.text(),
                twice.text()
            )
        })?;
        ensure(!once.text().contains(['>', '<', '|', 'Y', 'p']), || {
            format!("token {w:?} normalized to {:?}", once.text())
        })?;
    }
    let n = |s: &str| normalize(&Transcript::from_text("u", s), &policy).text();
    ensure(n(">nh") == n("<nh") && n("<nh") == n("Anh"), || {
        format!(
            "fold classes differ: {:?} {:?} {:?}",
            n(">nh"),
            n("<nh"),
            n("Anh")
        )
    })?;
    Ok(format!(
        "1000 tokens idempotent, >nh/<nh/Anh -> {:?}",
        n(">nh")
    ))
}

fn buckwalter_bijection() -> Outcome {
    let entries = table_entries();
    for &(bw, ar) in entries {
        let (b, a) = (bw.to_string(), ar.to_string());
        ensure(arabic_to_bw(&bw_to_arabic(&b)) == b, || {
            format!("{bw:?} does not round-trip")
        })?;
        ensure(bw_to_arabic(&arabic_to_bw(&a)) == a, || {
            format!("U+{:04X} does not round-trip", ar as u32)
        })?;
    }
    let mut targets: Vec<char> = entries.iter().map(|e| e.1).collect();
    targets.sort_unstable();
    targets.dedup();
    ensure(targets.len() == entries.len(), || {
        "duplicate Arabic targets".into()
    })?;
    Ok(format!("{} characters round-trip both ways", entries.len()))
}

fn merged(segs: &[Segment], rec: &str) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = segs
        .iter()
        .filter(|s| s.rec_id == rec)
        .map(|s| (s.start_s, s.end_s))
        .collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (s, e) in v {
        match out.last_mut() {
            Some(last) if s <= last.1 => last.1 = last.1.max(e),
            _ => out.push((s, e)),
        }
    }
    out
}

fn capping_bound() -> Outcome {
    let mut rng = rng(8);
    let mut longest_in = 0.0f64;
    for case in 0..100 {
        let mut primary = Vec::new();
        let mut bounds = Vec::new();
        for rec in ["r1", "r2", "r3"] {
            let mut t = rng.gen_range(0.0..5.0);
            for _ in 0..rng.gen_range(1..=6) {
                let d = rng.gen_range(0.5..=120.0);
                primary.push(Segment::new(rec, t, t + d).unwrap());
                longest_in = longest_in.max(d);
                t += d + rng.gen_range(0.0..3.0);
            }
            let mut b = 0.0;
            while b < t {
                let d = rng.gen_range(1.0..40.0);
                bounds.push(Segment::new(rec, b, b + d).unwrap());
                b += d + rng.gen_range(0.05..2.0);
            }
        }
        let out = cap_segments(&primary, &bounds, 25.0).map_err(|e| format!("case {case}: {e}"))?;
        if let Some(s) = out.iter().find(|s| s.duration() > 25.0) {
            return Err(format!("case {case}: {} s piece", s.duration()));
        }
        for rec in ["r1", "r2", "r3"] {
            ensure(merged(&primary, rec) == merged(&out, rec), || {
                format!("case {case}: coverage of {rec} changed")
            })?;
        }
        let stats = duration_stats(&out).map_err(|e| e.to_string())?;
        ensure(stats.over_30_percent() == 0.0, || {
            format!("case {case}: over-30 bucket not empty")
        })?;
    }
    Ok(format!(
        "100 segmentations (longest input {longest_in:.1} s), all pieces <= 25 s, coverage exact"
    ))
}

fn vad_sanity() -> Outcome {
    let rate = 16000u32;
    let params = VadParams::default();
    let silence = AudioBuffer::new(vec![0.0; 2 * rate as usize], rate).unwrap();
    let segs = energy_vad(&silence, "zero", &params).map_err(|e| e.to_string())?;
    ensure(segs.is_empty(), || {
        format!("zero audio gave {} segments", segs.len())
    })?;

    let mut samples = vec![0.0; rate as usize / 2];
    samples.extend(
        (0..rate)
            .map(|i| 0.5 * (2.0 * std::f64::consts::PI * 440.0 * i as f64 / rate as f64).sin()),
    );
    samples.extend(vec![0.0; rate as usize / 2]);
    let tone = AudioBuffer::new(samples, rate).unwrap();
    let segs = energy_vad(&tone, "tone", &params).map_err(|e| e.to_string())?;
    let tol = 2.0 * params.hop_ms / 1000.0;
    ensure(segs.len() == 1, || {
        format!("tone gave {} segments", segs.len())
    })?;
    let s = &segs[0];
    ensure(
        (s.start_s - 0.5).abs() <= tol && (s.end_s - 1.5).abs() <= tol,
        || format!("tone segment [{}, {}] vs [0.5, 1.5]", s.start_s, s.end_s),
    )?;
    Ok(format!(
        "zero audio: none; tone: [{}, {}] vs [0.5, 1.5]",
        s.start_s, s.end_s
    ))
}

fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Matrix {
    Matrix::new(r, c, (0..r * c).map(|_| rng.gen_range(-2.0..2.0)).collect()).unwrap()
}

fn scalar_attention(q: &Matrix, k: &Matrix, v: &Matrix) -> Vec<f64> {
    let d = q.cols() as f64;
    let mut out = Vec::new();
    for i in 0..q.rows() {
        let s: Vec<f64> = (0..k.rows())
            .map(|j| {
                (0..q.cols())
                    .map(|c| q.get(i, c) * k.get(j, c))
                    .sum::<f64>()
                    / d.sqrt()
            })
            .collect();
        let m = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let z: f64 = s.iter().map(|x| (x - m).exp()).sum();
        for c in 0..v.cols() {
            out.push(
                (0..k.rows())
                    .map(|j| (s[j] - m).exp() / z * v.get(j, c))
                    .sum(),
            );
        }
    }
    out
}

fn kernels() -> Outcome {
    let mut rng = rng(10);
    let (mut soft, mut attn) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let (n, m, d, dv) = (
            rng.gen_range(1..=6),
            rng.gen_range(1..=6),
            rng.gen_range(1..=5),
            rng.gen_range(1..=4),
        );
        let (q, k, v) = (
            random_matrix(&mut rng, n, d),
            random_matrix(&mut rng, m, d),
            random_matrix(&mut rng, m, dv),
        );
        let w = attention_weights(&q, &k).unwrap();
        for r in 0..n {
            soft = soft.max((w.row(r).iter().sum::<f64>() - 1.0).abs());
        }
        let z = self_attention(&q, &k, &v).unwrap();
        for (a, b) in z.data().iter().zip(scalar_attention(&q, &k, &v)) {
            attn = attn.max((a - b).abs());
        }
    }
    ensure(soft <= 1e-12, || format!("softmax row deviation {soft:e}"))?;
    ensure(attn <= 1e-12, || format!("attention deviation {attn:e}"))?;
    let pe = positional_encoding(100, 32).unwrap();
    let mut pe_dev = 0.0f64;
    for p in 0..100 {
        for i in (0..32).step_by(2) {
            pe_dev = pe_dev.max((pe.get(p, i).powi(2) + pe.get(p, i + 1).powi(2) - 1.0).abs());
        }
    }
    ensure(pe_dev <= 1e-12, || {
        format!("sin^2 + cos^2 deviation {pe_dev:e}")
    })?;
    ensure((0..32).all(|i| pe.get(0, i) == (i % 2) as f64), || {
        "PE(0, .) is not 0, 1, 0, 1, ...".into()
    })?;
    Ok(format!(
        "softmax {soft:.1e}, attention vs scalar {attn:.1e}, PE {pe_dev:.1e}"
    ))
}

fn chunker() -> Outcome {
    let mut rng = rng(11);
    for case in 0..300 {
        let n = if case < 5 {
            [0, 1, 200, 201, 2000][case]
        } else {
            rng.gen_range(0..=2000)
        };
        let input: Vec<usize> = (0..n).collect();
        let chunks = chunk_text(&input, 200, 50).map_err(|e| e.to_string())?;
        ensure(
            chunks.iter().all(|c| c.len() <= 200 && !c.is_empty()),
            || format!("n={n}: chunk size out of range"),
        )?;
        for pair in chunks.windows(2) {
            let overlap = pair[0].iter().filter(|x| pair[1].contains(x)).count();
            ensure(
                overlap == 50 && pair[0][pair[0].len() - 50..] == pair[1][..50],
                || format!("n={n}: overlap {overlap}"),
            )?;
        }
        let mut rebuilt: Vec<usize> = chunks.first().map(|c| c.to_vec()).unwrap_or_default();
        for c in chunks.iter().skip(1) {
            rebuilt.extend_from_slice(&c[50..]);
        }
        ensure(rebuilt == input, || {
            format!("n={n}: reconstruction differs")
        })?;
    }
    Ok("300 lengths in [0, 2000] reconstruct with overlap 50".into())
}

fn fixtures() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures"))
}

fn run_cli(args: &[&str], workers: usize) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_asrbench"))
        .current_dir(fixtures())
        .args(args)
        .args(["--workers", &workers.to_string()])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?} exited {}: {}",
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    Ok(text
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"wall_time_s\""))
        .collect::<Vec<_>>()
        .join("\n"))
}

fn cli_golden() -> Outcome {
    let commands: [&[&str]; 5] = [
        &[
            "score",
            "--ref",
            "ref.txt",
            "--hyp",
            "hyp.txt",
            "--normalize",
            "full",
        ],
        &["gap", "--values", "gap.json"],
        &["errors", "--ref", "ref.txt", "--hyp", "hyp.txt"],
        &[
            "cap",
            "--segments",
            "detector.seg",
            "--boundaries",
            "vad.seg",
        ],
        &[
            "decode", "--post", "post.ctc", "--beam", "20", "--lm", "lm.txt", "--dec", "dec.txt",
        ],
    ];
    let many = std::thread::available_parallelism().map_or(4, |n| n.get().max(4));
    for args in commands {
        let first = run_cli(args, 1)?;
        let again = run_cli(args, 1)?;
        let parallel = run_cli(args, many)?;
        ensure(first == again, || format!("{}: two runs differ", args[0]))?;
        ensure(first == parallel, || {
            format!("{}: 1 vs {many} workers differ", args[0])
        })?;
    }
    Ok(format!(
        "score, gap, errors, cap, decode identical over 2 runs and 1/{many} workers"
    ))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "CTC completeness",
            limit: Some(Duration::from_secs(5)),
            run: ctc_completeness,
        },
        Criterion {
            id: 2,
            name: "beam-oracle equivalence",
            limit: Some(Duration::from_secs(30)),
            run: beam_oracle,
        },
        Criterion {
            id: 3,
            name: "alignment optimality",
            limit: Some(Duration::from_secs(10)),
            run: alignment_optimality,
        },
        Criterion {
            id: 4,
            name: "MR-WER dominance",
            limit: None,
            run: mr_dominance,
        },
        Criterion {
            id: 5,
            name: "gap formula",
            limit: None,
            run: gap_formula,
        },
        Criterion {
            id: 6,
            name: "normalization",
            limit: None,
            run: normalization,
        },
        Criterion {
            id: 7,
            name: "Buckwalter bijection",
            limit: None,
            run: buckwalter_bijection,
        },
        Criterion {
            id: 8,
            name: "capping hard bound",
            limit: None,
            run: capping_bound,
        },
        Criterion {
            id: 9,
            name: "VAD sanity",
            limit: None,
            run: vad_sanity,
        },
        Criterion {
            id: 10,
            name: "kernels",
            limit: None,
            run: kernels,
        },
        Criterion {
            id: 11,
            name: "chunker",
            limit: None,
            run: chunker,
        },
        Criterion {
            id: 12,
            name: "CLI golden determinism",
            limit: None,
            run: cli_golden,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let started = Instant::now();
        let result = (c.run)();
        let elapsed = started.elapsed();
        let result = match (result, c.limit) {
            (Ok(msg), Some(limit)) if elapsed > limit => {
                Err(format!("{msg}; took {elapsed:.2?}, limit {limit:?}"))
            }
            (r, _) => r,
        };
        match result {
            Ok(msg) => println!("PASS  {:>2}. {}: {msg} [{elapsed:.2?}]", c.id, c.name),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {:>2}. {}: {msg} [{elapsed:.2?}]", c.id, c.name);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
