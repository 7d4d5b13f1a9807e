#ifndef ORDGRAM_H
#define ORDGRAM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum OrdgramStatus {
  ORDGRAM_STATUS_OK = 0,
  ORDGRAM_STATUS_NULL_ARGUMENT = 1,
  ORDGRAM_STATUS_INVALID_UTF8 = 2,
  ORDGRAM_STATUS_PARSE_ERROR = 3,
  ORDGRAM_STATUS_ORDINAL_PARSE_ERROR = 4,
  ORDGRAM_STATUS_NOT_AN_ORDINAL_GRAMMAR = 5,
  ORDGRAM_STATUS_LEFT_RECURSION = 6,
  ORDGRAM_STATUS_BUDGET_EXCEEDED = 7,
  /**
   * Any other error reported by the library.
   */
  ORDGRAM_STATUS_FAILED = 8,
  ORDGRAM_STATUS_PANIC = 9,
} OrdgramStatus;

/**
 * A parsed grammar.
 */
typedef struct OrdgramGrammar OrdgramGrammar;

/**
 * Resource limits for [`ordgram_order_type`]. Zero fields take the default.
 */
typedef struct OrdgramLimits {
  size_t step_budget;
  size_t depth_cap;
  size_t substitution_budget;
} OrdgramLimits;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses grammar text into a new handle stored in `*out`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum OrdgramStatus ordgram_grammar_parse(const char *text, struct OrdgramGrammar **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `g` must come from [`ordgram_grammar_parse`] and not be freed twice.
 */
void ordgram_grammar_free(struct OrdgramGrammar *g);

/**
 * Computes the order type and stores its Cantor normal form text in
 * `*out`. `limits` may be null.
 *
 * # Safety
 * `g` must be a live handle, `limits` null or valid, `out` valid.
 */
enum OrdgramStatus ordgram_order_type(const struct OrdgramGrammar *g,
                                      const struct OrdgramLimits *limits,
                                      char **out);

/**
 * Stores the normal form of the grammar, in grammar file syntax, in `*out`.
 *
 * # Safety
 * `g` must be a live handle and `out` valid.
 */
enum OrdgramStatus ordgram_normalize(const struct OrdgramGrammar *g, char **out);

/**
 * Sets `*out` to 1 when both grammars have the same order type, else 0.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` valid.
 */
enum OrdgramStatus ordgram_isomorphic(const struct OrdgramGrammar *a,
                                      const struct OrdgramGrammar *b,
                                      int *out);

/**
 * Compares two ordinals in text syntax, setting `*out` to -1, 0 or 1.
 *
 * # Safety
 * `a` and `b` must be NUL-terminated strings and `out` valid.
 */
enum OrdgramStatus ordgram_ordinal_cmp(const char *a, const char *b, int *out);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *ordgram_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void ordgram_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORDGRAM_H */
