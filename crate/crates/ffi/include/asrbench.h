#ifndef ASRBENCH_H
#define ASRBENCH_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AsrStatus {
  ASR_STATUS_OK = 0,
  ASR_STATUS_NULL_POINTER = 1,
  ASR_STATUS_INVALID_UTF8 = 2,
  ASR_STATUS_INVALID_ARGUMENT = 3,
  ASR_STATUS_PARSE = 4,
  ASR_STATUS_DIMENSION = 5,
  ASR_STATUS_IO = 6,
  ASR_STATUS_PANIC = 7,
} AsrStatus;

/**
 * An add-k n-gram language model.
 */
typedef struct AsrNgramLm AsrNgramLm;

/**
 * A parsed CTC posterior matrix with its symbol table.
 */
typedef struct AsrPosterior AsrPosterior;

/**
 * Edit counts of a scored corpus.
 */
typedef struct AsrErrorCounts {
  size_t substitutions;
  size_t deletions;
  size_t insertions;
  size_t ref_len;
} AsrErrorCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *asrbench_version(void);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library from this thread.
 */
const char *asrbench_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void asrbench_string_free(char *s);

/**
 * Normalizes one line of space-separated Buckwalter tokens with the
 * default policy.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum AsrStatus asrbench_normalize(const char *text, char **out);

/**
 * Transliterates Arabic script to Buckwalter, or back when `to_arabic` is
 * set.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum AsrStatus asrbench_transliterate(const char *text, bool to_arabic, char **out);

/**
 * Pooled WER counts of two transcript files' contents, matched by
 * utterance id.
 *
 * # Safety
 * `reference` and `hypothesis` must be NUL-terminated strings; `out` must
 * be writable.
 */
enum AsrStatus asrbench_wer(const char *reference,
                            const char *hypothesis,
                            struct AsrErrorCounts *out);

/**
 * Disagreement gap. `b_to_b` is a row-major `j x k` matrix.
 *
 * # Safety
 * `a_to_b` must hold `j` values and `b_to_b` `j * k` values; `out` must be
 * writable.
 */
enum AsrStatus asrbench_gap(const double *a_to_b,
                            size_t j,
                            const double *b_to_b,
                            size_t k,
                            double *out);

/**
 * Parses a posterior file's contents into a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum AsrStatus asrbench_posterior_parse(const char *text, struct AsrPosterior **out);

/**
 * # Safety
 * `post` must be null or a live handle from [`asrbench_posterior_parse`].
 */
void asrbench_posterior_free(struct AsrPosterior *post);

/**
 * Number of frames, or 0 for a null handle.
 *
 * # Safety
 * `post` must be null or a live handle.
 */
size_t asrbench_posterior_frames(const struct AsrPosterior *post);

/**
 * CTC log-probability of a space-separated label sequence.
 *
 * # Safety
 * `post` must be a live handle, `labels` a NUL-terminated string and `out`
 * writable.
 */
enum AsrStatus asrbench_ctc_log_prob(const struct AsrPosterior *post,
                                     const char *labels,
                                     double *out);

/**
 * Parses a language model file's contents into a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum AsrStatus asrbench_lm_parse(const char *text, struct AsrNgramLm **out);

/**
 * # Safety
 * `lm` must be null or a live handle from [`asrbench_lm_parse`].
 */
void asrbench_lm_free(struct AsrNgramLm *lm);

/**
 * Perplexity of transcript-file contents.
 *
 * # Safety
 * `lm` must be a live handle, `text` a NUL-terminated string and `out`
 * writable.
 */
enum AsrStatus asrbench_lm_perplexity(const struct AsrNgramLm *lm, const char *text, double *out);

/**
 * Joint CTC + LM beam search. `lm` may be null; `max_len == 0` means the
 * number of frames. Writes the n-best list as JSON.
 *
 * # Safety
 * `post` must be a live handle, `lm` null or a live handle, `out` writable.
 */
enum AsrStatus asrbench_decode(const struct AsrPosterior *post,
                               const struct AsrNgramLm *lm,
                               size_t beam,
                               size_t max_len,
                               double mu,
                               char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ASRBENCH_H */
