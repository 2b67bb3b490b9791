#ifndef WIDECAT_H
#define WIDECAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  WC_STATUS_OK = 0,
  WC_STATUS_NULL_POINTER = 1,
  WC_STATUS_INVALID_STRING = 2,
  WC_STATUS_INPUT_ERROR = 3,
  WC_STATUS_DOMAIN_ERROR = 4,
  WC_STATUS_RESOURCE_ERROR = 5,
  WC_STATUS_VERIFICATION_FAILED = 6,
  WC_STATUS_INTERNAL_ERROR = 7,
} WcStatus;

/**
 * A perfect complex of free abelian groups.
 */
typedef struct WcComplex WcComplex;

/**
 * A finitely generated abelian group.
 */
typedef struct WcGroup WcGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 */
const char *wc_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void wc_string_free(char *s);

/**
 * Smith normal form of a JSON matrix (`[[...], ...]` or `{"matrix": ...}`),
 * written as `{"U", "D", "V", "diagonal"}`.
 *
 * # Safety
 * `matrix_json` must be a NUL-terminated string; `out` must be writable.
 */
WcStatus wc_snf_json(const char *matrix_json, char **out);

/**
 * Builds a group from a presentation `{"generators", "relations"}` or a
 * canonical form `{"rank", "invariant_factors"}`.
 *
 * # Safety
 * `group_json` must be a NUL-terminated string; `out` must be writable.
 */
WcStatus wc_group_from_json(const char *group_json, WcGroup **out);

/**
 * # Safety
 * `g` must be null or a handle from this library, not yet freed.
 */
void wc_group_free(WcGroup *g);

/**
 * Canonical form `{"rank", "invariant_factors"}`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
WcStatus wc_group_to_json(const WcGroup *g, char **out);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
WcStatus wc_group_free_rank(const WcGroup *g, size_t *out);

/**
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
WcStatus wc_group_direct_sum(const WcGroup *a, const WcGroup *b, WcGroup **out);

/**
 * `Hom(a, b)`.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
WcStatus wc_group_hom(const WcGroup *a, const WcGroup *b, WcGroup **out);

/**
 * `Ext^1(a, b)`.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
WcStatus wc_group_ext1(const WcGroup *a, const WcGroup *b, WcGroup **out);

/**
 * Length at the prime `p`; a domain error for groups of positive rank.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
WcStatus wc_group_p_length(const WcGroup *g, uint64_t p, uint64_t *out);

/**
 * Support as `"full"` or a list of primes.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
WcStatus wc_group_support_json(const WcGroup *g, char **out);

/**
 * Grothendieck class on `support` (`"full"` or `"2,3,..."`; null means the
 * group's own support), as `{"support", "coords"}`.
 *
 * # Safety
 * `g` must be a live handle; `support` null or NUL-terminated; `out` writable.
 */
WcStatus wc_group_k0_json(const WcGroup *g, const char *support, char **out);

/**
 * Builds a complex from `{"bottom_degree", "ranks", "differentials"}`.
 *
 * # Safety
 * `complex_json` must be a NUL-terminated string; `out` must be writable.
 */
WcStatus wc_complex_from_json(const char *complex_json, WcComplex **out);

/**
 * # Safety
 * `x` must be null or a handle from this library, not yet freed.
 */
void wc_complex_free(WcComplex *x);

/**
 * Nonzero homology groups keyed by degree.
 *
 * # Safety
 * `x` must be a live handle; `out` must be writable.
 */
WcStatus wc_complex_homology_json(const WcComplex *x, char **out);

/**
 * # Safety
 * `x` must be a live handle; `out` must be writable.
 */
WcStatus wc_complex_support_json(const WcComplex *x, char **out);

/**
 * # Safety
 * `x` must be a live handle; `out` must be writable.
 */
WcStatus wc_complex_euler_characteristic(const WcComplex *x, int64_t *out);

/**
 * Grothendieck class on `support`; null means the complex's own support.
 *
 * # Safety
 * `x` must be a live handle; `support` null or NUL-terminated; `out` writable.
 */
WcStatus wc_complex_k0_json(const WcComplex *x, const char *support, char **out);

/**
 * Krull-Schmidt parts of a thick support. With `poset_json` null the
 * spectrum is that of the integers and `support` is required; otherwise
 * `support` lists point names and defaults to the whole poset.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be writable.
 */
WcStatus wc_spec_decompose_json(const char *poset_json, const char *support, char **out);

/**
 * Runs a verification suite and writes its report. Returns
 * `VERIFICATION_FAILED` (with the report still written) when any trial fails.
 *
 * # Safety
 * `suite` must be NUL-terminated; `out` must be writable.
 */
WcStatus wc_verify_json(const char *suite, uint64_t trials, uint64_t seed, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WIDECAT_H */
