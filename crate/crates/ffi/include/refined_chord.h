#ifndef REFINED_CHORD_H
#define REFINED_CHORD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RcFormat {
  // `q + 7 + q^-1`
  RC_FORMAT_TEXT = 0,
  // `{"2":"1","0":"7","-2":"1"}`
  RC_FORMAT_JSON = 1,
  // `q+7+q^-1`
  RC_FORMAT_COMPACT = 2,
} RcFormat;

typedef enum RcStatus {
  RC_STATUS_OK = 0,
  RC_STATUS_NULL_POINTER = 1,
  RC_STATUS_INVALID_UTF8 = 2,
  RC_STATUS_PARSE_ERROR = 3,
  RC_STATUS_INVALID_DEGREE = 4,
  RC_STATUS_INVALID_ENDS = 5,
  RC_STATUS_TOO_LARGE = 6,
  RC_STATUS_GENERICITY_FAILURE = 7,
  RC_STATUS_CACHE_ERROR = 8,
  RC_STATUS_OUT_OF_RANGE = 9,
  RC_STATUS_PANIC = 10,
} RcStatus;

// A thread-safe memo cache shared across invariant computations.
typedef struct RcCache RcCache;

// A validated degree.
typedef struct RcDegree RcDegree;

// A Laurent polynomial in `q^{1/2}`.
typedef struct RcPolynomial RcPolynomial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL after a success.
// The pointer stays valid until the next `rc_*` call on the same thread.
const char *rc_last_error(void);

// Library version as a static NUL-terminated string.
const char *rc_version(void);

// Parses a degree in the command-line grammar, e.g. `"P2:3"` or
// `"(-1,0)^2,(0,-2),(1,1)^2"`.
//
// # Safety
// `spec` must be a NUL-terminated string and `out` a valid pointer.
enum RcStatus rc_degree_parse(const char *spec, struct RcDegree **out);

// Builds a degree from `count` vectors stored as `x0, y0, x1, y1, …`.
//
// # Safety
// `xy` must point to `2 * count` readable integers and `out` be valid.
enum RcStatus rc_degree_from_vectors(const int64_t *xy, size_t count, struct RcDegree **out);

// Number of vectors in the degree, counted with multiplicity; 0 for NULL.
//
// # Safety
// `degree` must be NULL or a live handle.
size_t rc_degree_len(const struct RcDegree *degree);

// The memoization key of the degree.
//
// # Safety
// `degree` must be a live handle and `out` valid.
enum RcStatus rc_degree_key(const struct RcDegree *degree, char **out);

// # Safety
// `degree` must be NULL or a handle not yet freed.
void rc_degree_free(struct RcDegree *degree);

// A fresh, empty memo cache.
struct RcCache *rc_cache_new(void);

// Loads a JSON-lines cache file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` valid.
enum RcStatus rc_cache_load(const char *path, struct RcCache **out);

// Writes every cached entry to a JSON-lines file.
//
// # Safety
// `cache` must be a live handle and `path` a NUL-terminated string.
enum RcStatus rc_cache_save(const struct RcCache *cache, const char *path);

// Number of cached entries; 0 for NULL.
//
// # Safety
// `cache` must be NULL or a live handle.
size_t rc_cache_len(const struct RcCache *cache);

// # Safety
// `cache` must be NULL or a handle not yet freed.
void rc_cache_free(struct RcCache *cache);

// The invariant by the chord recursion with default ends. `cache` may be
// NULL to compute without memoization.
//
// # Safety
// `cache` must be NULL or live, `degree` live, `out` valid.
enum RcStatus rc_refined_invariant(const struct RcCache *cache,
                                   const struct RcDegree *degree,
                                   struct RcPolynomial **out);

// As [`rc_refined_invariant`] with the chord running from `(v1x, v1y)` to
// `(vmx, vmy)`.
//
// # Safety
// Same as [`rc_refined_invariant`].
enum RcStatus rc_refined_invariant_with_ends(const struct RcCache *cache,
                                             const struct RcDegree *degree,
                                             int64_t v1x,
                                             int64_t v1y,
                                             int64_t vmx,
                                             int64_t vmy,
                                             struct RcPolynomial **out);

// The invariant by direct enumeration at the generic moments drawn from
// `seed`. Degrees with more than 10 ends need `allow_large`.
//
// # Safety
// `degree` must be live and `out` valid.
enum RcStatus rc_oracle_invariant(const struct RcDegree *degree,
                                  uint64_t seed,
                                  bool allow_large,
                                  struct RcPolynomial **out);

// Renders the polynomial.
//
// # Safety
// `poly` must be live and `out` valid.
enum RcStatus rc_polynomial_to_string(const struct RcPolynomial *poly,
                                      enum RcFormat format,
                                      char **out);

// Parses either text rendering back into a polynomial.
//
// # Safety
// `text` must be a NUL-terminated string and `out` valid.
enum RcStatus rc_polynomial_parse(const char *text, struct RcPolynomial **out);

// Number of nonzero terms; 0 for NULL.
//
// # Safety
// `poly` must be NULL or live.
size_t rc_polynomial_term_count(const struct RcPolynomial *poly);

// Term `index` in decreasing exponent order: its exponent in half units
// (`q^{k/2}`) and its coefficient as a decimal string.
//
// # Safety
// `poly` must be live; `half_exponent` and `coefficient` valid.
enum RcStatus rc_polynomial_term(const struct RcPolynomial *poly,
                                 size_t index,
                                 int64_t *half_exponent,
                                 char **coefficient);

// The value at `q = 1` as a decimal string.
//
// # Safety
// `poly` must be live and `out` valid.
enum RcStatus rc_polynomial_evaluate_at_one(const struct RcPolynomial *poly, char **out);

// True when both are live and equal.
//
// # Safety
// Each pointer must be NULL or live.
bool rc_polynomial_equal(const struct RcPolynomial *a, const struct RcPolynomial *b);

// # Safety
// `poly` must be NULL or a handle not yet freed.
void rc_polynomial_free(struct RcPolynomial *poly);

// # Safety
// `s` must be NULL or a string returned by this library and not yet freed.
void rc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REFINED_CHORD_H */
