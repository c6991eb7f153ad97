#ifndef PRIMSEQ_H
#define PRIMSEQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define PRIMSEQ_SIDE_UPPER 0

#define PRIMSEQ_SIDE_LOWER 1

#define PRIMSEQ_VERDICT_REJECTED 0

#define PRIMSEQ_VERDICT_PASSES_NECESSARY 1

#define PRIMSEQ_VERDICT_CERTIFIED_TRUNCATED 2

typedef enum PrimseqStatus {
  PRIMSEQ_STATUS_OK = 0,
  PRIMSEQ_STATUS_PARSE = 1,
  PRIMSEQ_STATUS_USAGE = 2,
  PRIMSEQ_STATUS_DOMAIN = 3,
  PRIMSEQ_STATUS_NOT_ADMISSIBLE = 4,
  PRIMSEQ_STATUS_INFEASIBLE_PREFIX = 5,
  PRIMSEQ_STATUS_TOLERANCE_NOT_REACHED = 6,
  PRIMSEQ_STATUS_LP = 7,
  PRIMSEQ_STATUS_IO = 8,
  PRIMSEQ_STATUS_NULL_ARGUMENT = 9,
  PRIMSEQ_STATUS_INVALID_UTF8 = 10,
  PRIMSEQ_STATUS_OUT_OF_RANGE = 11,
  PRIMSEQ_STATUS_PANIC = 12,
} PrimseqStatus;

/**
 * Bound enclosure with certificate and extremal law.
 */
typedef struct PrimseqBound PrimseqBound;

/**
 * Parsed distribution spec.
 */
typedef struct PrimseqDistribution PrimseqDistribution;

/**
 * Envelope sweep points.
 */
typedef struct PrimseqEnvelope PrimseqEnvelope;

/**
 * Primitive sequence on an interval.
 */
typedef struct PrimseqSequence PrimseqSequence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Crate version as a static NUL-terminated string.
 */
const char *primseq_version(void);

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *primseq_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void primseq_string_free(char *s);

/**
 * Parses a distribution spec such as `uniform`, `beta 2 3` or
 * `atomic[0,1] 0:1/2 1:1/2`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum PrimseqStatus primseq_dist_parse(const char *spec, struct PrimseqDistribution **out);

/**
 * # Safety
 * `d` must be null or a handle from `primseq_dist_parse`, freed once.
 */
void primseq_dist_free(struct PrimseqDistribution *d);

/**
 * `eps_0..eps_order` of a distribution.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum PrimseqStatus primseq_dist_sequence(const struct PrimseqDistribution *d,
                                         size_t order,
                                         struct PrimseqSequence **out);

/**
 * Parses the text sequence format (`interval a b` then `n eps_n` rows).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum PrimseqStatus primseq_sequence_parse(const char *text, struct PrimseqSequence **out);

/**
 * # Safety
 * `s` must be null or a sequence handle, freed once.
 */
void primseq_sequence_free(struct PrimseqSequence *s);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum PrimseqStatus primseq_sequence_order(const struct PrimseqSequence *s, size_t *out);

/**
 * `eps_n` as `p/q`.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum PrimseqStatus primseq_sequence_term(const struct PrimseqSequence *s, size_t n, char **out);

/**
 * The sequence in the text file format.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum PrimseqStatus primseq_sequence_format(const struct PrimseqSequence *s, char **out);

/**
 * Admissibility screens; with `grid > 0` also grid-LP certification on that
 * many points. `verdict` receives a `PRIMSEQ_VERDICT_*` value; `report`
 * may be null.
 *
 * # Safety
 * `s` must be a live handle; `verdict` writable; `report` null or writable.
 */
enum PrimseqStatus primseq_check(const struct PrimseqSequence *s,
                                 size_t grid,
                                 int32_t *verdict,
                                 char **report);

/**
 * Sharp bound on `F(x0)` (upper) or `F(x0-)` (lower) given the whole
 * sequence as the constraint prefix. `tol` may be null for the default.
 *
 * # Safety
 * `s` live; `x0` NUL-terminated; `tol` null or NUL-terminated; `out` writable.
 */
enum PrimseqStatus primseq_cdf_bound(const struct PrimseqSequence *s,
                                     const char *x0,
                                     int32_t side,
                                     const char *tol,
                                     struct PrimseqBound **out);

/**
 * Sharp bound on `E[(b - X)^k] / k!`.
 *
 * # Safety
 * `s` live; `tol` null or NUL-terminated; `out` writable.
 */
enum PrimseqStatus primseq_moment_bound(const struct PrimseqSequence *s,
                                        size_t k,
                                        int32_t side,
                                        const char *tol,
                                        struct PrimseqBound **out);

/**
 * # Safety
 * `b` must be null or a bound handle, freed once.
 */
void primseq_bound_free(struct PrimseqBound *b);

/**
 * Enclosure `[lo, hi]` of the sharp bound as `p/q` strings.
 *
 * # Safety
 * `b` live; `lo` and `hi` writable.
 */
enum PrimseqStatus primseq_bound_enclosure(const struct PrimseqBound *b, char **lo, char **hi);

/**
 * Certified side of the enclosure as a double, for plotting.
 *
 * # Safety
 * `b` live; `out` writable.
 */
enum PrimseqStatus primseq_bound_value_f64(const struct PrimseqBound *b, double *out);

/**
 * Certificate coefficients in powers of `(b - x)`, lowest first, space
 * separated.
 *
 * # Safety
 * `b` live; `out` writable.
 */
enum PrimseqStatus primseq_bound_certificate(const struct PrimseqBound *b, char **out);

/**
 * # Safety
 * `b` live; `out` writable.
 */
enum PrimseqStatus primseq_bound_atom_count(const struct PrimseqBound *b, size_t *out);

/**
 * Atom `i` of the extremal law: location and weight.
 *
 * # Safety
 * `b` live; `x` and `w` writable.
 */
enum PrimseqStatus primseq_bound_atom(const struct PrimseqBound *b, size_t i, char **x, char **w);

/**
 * Upper and lower CDF bounds at `x0` for `m = 1..=m_max`.
 *
 * # Safety
 * `d` live; `x0` NUL-terminated; `tol` null or NUL-terminated; `out` writable.
 */
enum PrimseqStatus primseq_envelope(const struct PrimseqDistribution *d,
                                    const char *x0,
                                    size_t m_max,
                                    const char *tol,
                                    struct PrimseqEnvelope **out);

/**
 * # Safety
 * `e` must be null or an envelope handle, freed once.
 */
void primseq_envelope_free(struct PrimseqEnvelope *e);

/**
 * # Safety
 * `e` live; `out` writable.
 */
enum PrimseqStatus primseq_envelope_len(const struct PrimseqEnvelope *e, size_t *out);

/**
 * Point `i`: order `m` and the upper and lower bounds as `p/q`.
 *
 * # Safety
 * `e` live; `m`, `upper` and `lower` writable.
 */
enum PrimseqStatus primseq_envelope_point(const struct PrimseqEnvelope *e,
                                          size_t i,
                                          size_t *m,
                                          char **upper,
                                          char **lower);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRIMSEQ_H */
