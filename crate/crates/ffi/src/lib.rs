//! C ABI for asrbench.
//!
//! Every fallible function returns an [`AsrStatus`]; on failure the message
//! is available from [`asrbench_last_error`] on the same thread. Strings
//! returned through out-parameters are owned by the caller and released with
//! [`asrbench_string_free`]; handles are released with their `_free`
//! function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use asrbench::decode::{
    joint_beam_search, nbest_json, perplexity, BeamConfig, NgramLm, NullScorer, PosteriorMatrix,
    Vocab,
};
use asrbench::kernels::CombineConfig;
use asrbench::scoring::{gap, wer};
use asrbench::text::{
    arabic_to_bw, bw_to_arabic, normalize, parse_transcripts, NormalizationPolicy, Transcript,
};
use asrbench::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    Dimension = 5,
    Io = 6,
    Panic = 7,
}

/// Edit counts of a scored corpus.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AsrErrorCounts {
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub ref_len: usize,
}

/// A parsed CTC posterior matrix with its symbol table.
pub struct AsrPosterior {
    post: PosteriorMatrix,
    vocab: Vocab,
}

/// An add-k n-gram language model.
pub struct AsrNgramLm {
    lm: NgramLm,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(AsrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Format { .. } => AsrStatus::Parse,
            Error::Dimension(_) => AsrStatus::Dimension,
            Error::File { .. } | Error::Io(_) | Error::Wav(_) => AsrStatus::Io,
            _ => AsrStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(AsrStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AsrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            AsrStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            AsrStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(AsrStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s)
        .map_err(|_| Failure(AsrStatus::InvalidArgument, "result contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn asrbench_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library from this thread.
#[no_mangle]
pub extern "C" fn asrbench_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn asrbench_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Normalizes one line of space-separated Buckwalter tokens with the
/// default policy.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn asrbench_normalize(
    text: *const c_char,
    out: *mut *mut c_char,
) -> AsrStatus {
    guard(|| {
        let t = Transcript::from_text("u", str_arg(text, "text")?);
        put_string(out, normalize(&t, &NormalizationPolicy::default()).text())
    })
}

/// Transliterates Arabic script to Buckwalter, or back when `to_arabic` is
/// set.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn asrbench_transliterate(
    text: *const c_char,
    to_arabic: bool,
    out: *mut *mut c_char,
) -> AsrStatus {
    guard(|| {
        let s = str_arg(text, "text")?;
        put_string(
            out,
            if to_arabic {
                bw_to_arabic(s)
            } else {
                arabic_to_bw(s)
            },
        )
    })
}

/// Pooled WER counts of two transcript files' contents, matched by
/// utterance id.
///
/// # Safety
/// `reference` and `hypothesis` must be NUL-terminated strings; `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn asrbench_wer(
    reference: *const c_char,
    hypothesis: *const c_char,
    out: *mut AsrErrorCounts,
) -> AsrStatus {
    guard(|| {
        let refs = parse_transcripts(str_arg(reference, "reference")?, "reference")?;
        let hyps = parse_transcripts(str_arg(hypothesis, "hypothesis")?, "hypothesis")?;
        let mut pairs = Vec::with_capacity(refs.len());
        for r in &refs {
            let h = hyps.iter().find(|h| h.utt_id == r.utt_id).ok_or_else(|| {
                Failure(
                    AsrStatus::InvalidArgument,
                    format!("no hypothesis for utterance {}", r.utt_id),
                )
            })?;
            pairs.push((r.tokens.as_slice(), h.tokens.as_slice()));
        }
        let c = wer(&pairs)?;
        put(
            out,
            AsrErrorCounts {
                substitutions: c.sub,
                deletions: c.del,
                insertions: c.ins,
                ref_len: c.ref_len,
            },
        )
    })
}

/// Disagreement gap. `b_to_b` is a row-major `j x k` matrix.
///
/// # Safety
/// `a_to_b` must hold `j` values and `b_to_b` `j * k` values; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn asrbench_gap(
    a_to_b: *const f64,
    j: usize,
    b_to_b: *const f64,
    k: usize,
    out: *mut f64,
) -> AsrStatus {
    guard(|| {
        if a_to_b.is_null() || b_to_b.is_null() {
            return Err(null("disagreement array"));
        }
        let a = std::slice::from_raw_parts(a_to_b, j);
        let b: Vec<Vec<f64>> = std::slice::from_raw_parts(b_to_b, j * k)
            .chunks(k.max(1))
            .map(<[f64]>::to_vec)
            .collect();
        put(out, gap(a, &b)?)
    })
}

/// Parses a posterior file's contents into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn asrbench_posterior_parse(
    text: *const c_char,
    out: *mut *mut AsrPosterior,
) -> AsrStatus {
    guard(|| {
        let (post, vocab) = PosteriorMatrix::parse(str_arg(text, "text")?, "posterior")?;
        put(out, Box::into_raw(Box::new(AsrPosterior { post, vocab })))
    })
}

/// # Safety
/// `post` must be null or a live handle from [`asrbench_posterior_parse`].
#[no_mangle]
pub unsafe extern "C" fn asrbench_posterior_free(post: *mut AsrPosterior) {
    if !post.is_null() {
        drop(Box::from_raw(post));
    }
}

/// Number of frames, or 0 for a null handle.
///
/// # Safety
/// `post` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn asrbench_posterior_frames(post: *const AsrPosterior) -> usize {
    post.as_ref().map_or(0, |p| p.post.frames())
}

/// CTC log-probability of a space-separated label sequence.
///
/// # Safety
/// `post` must be a live handle, `labels` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn asrbench_ctc_log_prob(
    post: *const AsrPosterior,
    labels: *const c_char,
    out: *mut f64,
) -> AsrStatus {
    guard(|| {
        let p = post.as_ref().ok_or_else(|| null("posterior"))?;
        let ids = str_arg(labels, "labels")?
            .split_whitespace()
            .map(|s| {
                p.vocab.id(s).ok_or_else(|| {
                    Failure(AsrStatus::InvalidArgument, format!("unknown symbol {s:?}"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        put(
            out,
            asrbench::decode::ctc_log_prob(&p.post, &ids, &p.vocab)?,
        )
    })
}

/// Parses a language model file's contents into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn asrbench_lm_parse(
    text: *const c_char,
    out: *mut *mut AsrNgramLm,
) -> AsrStatus {
    guard(|| {
        let lm = NgramLm::parse(str_arg(text, "text")?, "lm")?;
        put(out, Box::into_raw(Box::new(AsrNgramLm { lm })))
    })
}

/// # Safety
/// `lm` must be null or a live handle from [`asrbench_lm_parse`].
#[no_mangle]
pub unsafe extern "C" fn asrbench_lm_free(lm: *mut AsrNgramLm) {
    if !lm.is_null() {
        drop(Box::from_raw(lm));
    }
}

/// Perplexity of transcript-file contents.
///
/// # Safety
/// `lm` must be a live handle, `text` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn asrbench_lm_perplexity(
    lm: *const AsrNgramLm,
    text: *const c_char,
    out: *mut f64,
) -> AsrStatus {
    guard(|| {
        let m = lm.as_ref().ok_or_else(|| null("lm"))?;
        let ts = parse_transcripts(str_arg(text, "text")?, "text")?;
        put(out, perplexity(&m.lm, &ts)?)
    })
}

/// Joint CTC + LM beam search. `lm` may be null; `max_len == 0` means the
/// number of frames. Writes the n-best list as JSON.
///
/// # Safety
/// `post` must be a live handle, `lm` null or a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn asrbench_decode(
    post: *const AsrPosterior,
    lm: *const AsrNgramLm,
    beam: usize,
    max_len: usize,
    mu: f64,
    out: *mut *mut c_char,
) -> AsrStatus {
    guard(|| {
        let p = post.as_ref().ok_or_else(|| null("posterior"))?;
        let weights = CombineConfig {
            mu,
            ..CombineConfig::default()
        };
        let max_len = if max_len == 0 {
            p.post.frames()
        } else {
            max_len
        };
        let cfg = BeamConfig::new(beam, max_len, weights);
        let scorer = lm.as_ref().map(|m| m.lm.scorer(&p.vocab));
        let hyps = joint_beam_search(
            &p.post,
            &p.vocab,
            &cfg,
            None::<&NullScorer>,
            scorer.as_ref(),
        )?;
        put_string(out, nbest_json(&hyps, &p.vocab).to_string())
    })
}
