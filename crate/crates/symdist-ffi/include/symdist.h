/* C interface for the distinct-evaluation toolkit. */

#ifndef SYMDIST_H
#define SYMDIST_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes for every FFI call. `Ok` is zero; everything else is an
// error whose text is available from `symdist_last_error_message`.
typedef enum SymdistStatus {
  SYMDIST_STATUS_OK = 0,
  SYMDIST_STATUS_NULL_ARGUMENT = 1,
  SYMDIST_STATUS_INVALID_UTF8 = 2,
  SYMDIST_STATUS_PARSE = 3,
  SYMDIST_STATUS_IO = 4,
  SYMDIST_STATUS_INDEX_OUT_OF_RANGE = 5,
  SYMDIST_STATUS_DIMENSION_MISMATCH = 6,
  SYMDIST_STATUS_DOMAIN_ERROR = 7,
  SYMDIST_STATUS_HYPOTHESIS_VIOLATED = 8,
  SYMDIST_STATUS_DEGENERATE_FAMILY = 9,
  SYMDIST_STATUS_MEMORY_BUDGET_EXCEEDED = 10,
  SYMDIST_STATUS_BUDGET_EXCEEDED = 11,
  SYMDIST_STATUS_RETRIES_EXHAUSTED = 12,
  SYMDIST_STATUS_IDENTITY_VIOLATED = 13,
  SYMDIST_STATUS_SCHEMA_MISMATCH = 14,
  SYMDIST_STATUS_PANIC = 15,
} SymdistStatus;

// Opaque handle to a validated sequence (integer- or rational-valued).
typedef struct SymdistSequence SymdistSequence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Most recent error message on this thread; valid until the next failing
// call on the same thread. Never NULL.
const char *symdist_last_error_message(void);

// Parses a sequence file document (JSON text) into a handle.
//
// # Safety
// `json` must be NUL-terminated; `out` must be a valid pointer.
enum SymdistStatus symdist_sequence_parse(const char *json, struct SymdistSequence **out);

// Releases a sequence handle. NULL is ignored.
//
// # Safety
// `seq` must come from this library and not be freed twice.
void symdist_sequence_free(struct SymdistSequence *seq);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void symdist_string_free(char *s);

// Number of elements; 0 when the handle is NULL.
//
// # Safety
// `seq` must be a live handle from this library or NULL.
uint32_t symdist_sequence_n(const struct SymdistSequence *seq);

// Coordinates per element; 0 when the handle is NULL.
//
// # Safety
// `seq` must be a live handle from this library or NULL.
uint32_t symdist_sequence_k(const struct SymdistSequence *seq);

// Polynomial degree; 0 when the handle is NULL.
//
// # Safety
// `seq` must be a live handle from this library or NULL.
uint32_t symdist_sequence_m(const struct SymdistSequence *seq);

// Serializes a handle back to the sequence file format.
//
// # Safety
// `seq` must be a live handle; `out` must be a valid pointer.
enum SymdistStatus symdist_sequence_to_json(const struct SymdistSequence *seq, char **out);

// Checks evaluation distinctness. `real_spacing` 0 demands exact
// distinctness, nonzero demands unit spacing. `min_size` below 0 selects
// the default (the polynomial degree). On success `*out_distinct` is 1 for
// pass and 0 for fail; `out_witness_json` (optional) receives the
// colliding pair as a JSON object, or NULL on pass.
//
// # Safety
// `seq` must be a live handle; `out_distinct` must be valid;
// `out_witness_json` may be NULL.
enum SymdistStatus symdist_verify(const struct SymdistSequence *seq,
                                  int32_t real_spacing,
                                  int64_t min_size,
                                  int32_t *out_distinct,
                                  char **out_witness_json);

// Evaluates the degree-m elementary symmetric polynomial on the subset
// given by 1-based, strictly increasing `indices`. The value is written as
// decimal coordinate strings joined by ';'.
//
// # Safety
// `seq` must be a live handle; `indices` must point to `len` entries;
// `out_value` must be valid.
enum SymdistStatus symdist_eval(const struct SymdistSequence *seq,
                                const uint32_t *indices,
                                size_t len,
                                char **out_value);

// Emits the closed-form bound table for the parameters as CSV text
// (the same schema as the command-line `bounds` subcommand).
//
// # Safety
// `lambda` must be NUL-terminated; `out_csv` must be valid.
enum SymdistStatus symdist_bounds_csv(uint32_t n,
                                      uint32_t k,
                                      uint32_t m,
                                      const char *lambda,
                                      char **out_csv);

// Searches for the least entry bound `M <= m_max` (decimal string) with
// all qualifying evaluations distinct. `max_nodes` 0 means unlimited. The
// outcome is a JSON object with fields `status`, `mMin`, and `witness`.
//
// # Safety
// `lambda` and `m_max` must be NUL-terminated; `out_json` must be valid.
enum SymdistStatus symdist_min_m_search(uint32_t n,
                                        uint32_t k,
                                        uint32_t m,
                                        const char *lambda,
                                        const char *m_max,
                                        uint64_t max_nodes,
                                        char **out_json);

// Builds the explicit integer doubling construction for degree `m >= 2`
// and rational excess `epsilon > 0`; the result always passes
// verification.
//
// # Safety
// `epsilon` must be NUL-terminated; `out` must be a valid pointer.
enum SymdistStatus symdist_construct_integer(uint32_t n,
                                             uint32_t m,
                                             const char *epsilon,
                                             struct SymdistSequence **out);

// Samples and repairs a sequence with entries in [1, bound] (decimal
// string). On success `out` receives the sequence and `out_log_json`
// (optional) the attempt log.
//
// # Safety
// `lambda` and `bound` must be NUL-terminated; `out` must be valid;
// `out_log_json` may be NULL.
enum SymdistStatus symdist_construct_probabilistic(uint32_t n,
                                                   uint32_t k,
                                                   uint32_t m,
                                                   const char *lambda,
                                                   const char *bound,
                                                   uint32_t retries,
                                                   uint64_t seed,
                                                   struct SymdistSequence **out,
                                                   char **out_log_json);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SYMDIST_H */
