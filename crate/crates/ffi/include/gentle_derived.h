#ifndef GENTLE_DERIVED_H
#define GENTLE_DERIVED_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every fallible call.
 */
typedef enum GentleStatus {
  GENTLE_STATUS_OK = 0,
  GENTLE_STATUS_NULL_POINTER = 1,
  GENTLE_STATUS_INVALID_UTF8 = 2,
  GENTLE_STATUS_PARSE = 3,
  GENTLE_STATUS_DOMAIN = 4,
  GENTLE_STATUS_PANIC = 5,
} GentleStatus;

/**
 * Opaque algebra handle.
 */
typedef struct GentleAlgebraHandle GentleAlgebraHandle;

/**
 * Opaque word handle.
 */
typedef struct GentleWord GentleWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Owned by the
 * library and valid until the next failing call on the same thread.
 */
const char *gentle_last_error(void);

/**
 * Parse an algebra from the bound-quiver text format.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum GentleStatus gentle_algebra_parse(const char *text, struct GentleAlgebraHandle **out);

/**
 * Build the discrete derived algebra with parameters `r`, `n`, `m`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GentleStatus gentle_algebra_discrete(size_t r,
                                          size_t n,
                                          size_t m,
                                          struct GentleAlgebraHandle **out);

/**
 * Release an algebra handle. Null is ignored.
 *
 * # Safety
 * `alg` must come from this library and not be used afterwards.
 */
void gentle_algebra_free(struct GentleAlgebraHandle *alg);

/**
 * Number of arrows lying on cycles with full relations.
 *
 * # Safety
 * Pointers must be valid.
 */
enum GentleStatus gentle_algebra_cycle_arrows(const struct GentleAlgebraHandle *alg, size_t *out);

/**
 * Parse a word literal against an algebra.
 *
 * # Safety
 * Pointers must be valid; `text` NUL-terminated.
 */
enum GentleStatus gentle_word_parse(const struct GentleAlgebraHandle *alg,
                                    const char *text,
                                    struct GentleWord **out);

/**
 * Release a word handle. Null is ignored.
 *
 * # Safety
 * `w` must come from this library and not be used afterwards.
 */
void gentle_word_free(struct GentleWord *w);

/**
 * Dimension of morphisms from `v` to `w`, computed combinatorially.
 *
 * # Safety
 * Pointers must be valid and the words parsed against `alg`.
 */
enum GentleStatus gentle_hom_dim(const struct GentleAlgebraHandle *alg,
                                 const struct GentleWord *v,
                                 const struct GentleWord *w,
                                 size_t *out);

/**
 * Dimension of morphisms from `v` to `w` by linear algebra over GF(`prime`),
 * or over the rationals when `prime` is 0.
 *
 * # Safety
 * Pointers must be valid and the words parsed against `alg`.
 */
enum GentleStatus gentle_oracle_hom_dim(const struct GentleAlgebraHandle *alg,
                                        const struct GentleWord *v,
                                        const struct GentleWord *w,
                                        uint64_t prime,
                                        size_t *out);

/**
 * Canonical basis from `v` to `w` as a JSON document. Release the string
 * with [`gentle_string_free`].
 *
 * # Safety
 * Pointers must be valid and the words parsed against `alg`.
 */
enum GentleStatus gentle_basis_json(const struct GentleAlgebraHandle *alg,
                                    const struct GentleWord *v,
                                    const struct GentleWord *w,
                                    char **out);

/**
 * Canonical key of a word, for isomorphism tests. Release with
 * [`gentle_string_free`].
 *
 * # Safety
 * Pointers must be valid and the word parsed against `alg`.
 */
enum GentleStatus gentle_word_canonical_key(const struct GentleAlgebraHandle *alg,
                                            const struct GentleWord *w,
                                            char **out);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void gentle_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GENTLE_DERIVED_H */
