#ifndef LPDEC_H
#define LPDEC_H

/* Generated by cbindgen; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of every fallible call.
 */
typedef enum LpdStatus {
  LPD_STATUS_OK = 0,
  LPD_STATUS_NULL_POINTER = 1,
  LPD_STATUS_INVALID_ARGUMENT = 2,
  LPD_STATUS_PARSE_ERROR = 3,
  LPD_STATUS_CODE_ERROR = 4,
  LPD_STATUS_DECODE_ERROR = 5,
  LPD_STATUS_PANIC = 6,
} LpdStatus;

typedef enum LpdDecodeStatus {
  LPD_DECODE_STATUS_ML_CODEWORD = 0,
  LPD_DECODE_STATUS_PSEUDOCODEWORD = 1,
  LPD_DECODE_STATUS_LIMIT_EXCEEDED = 2,
} LpdDecodeStatus;

/**
 * Opaque parity-check code.
 */
typedef struct LpdCode LpdCode;

typedef struct LpdDecodeOptions {
  /**
   * Cap on LP solves of the adaptive loop; 0 means `n`.
   */
  size_t max_iterations;
  bool warm_start;
  double epsilon_int;
} LpdDecodeOptions;

typedef struct LpdRpcBudget {
  size_t c_max;
  size_t lp_resolve_cap;
  /**
   * Wall-clock cap in milliseconds; 0 means none.
   */
  uint64_t t_max_ms;
  bool batch_cuts;
} LpdRpcBudget;

typedef struct LpdDecodeStats {
  enum LpdDecodeStatus status;
  bool integral;
  size_t iterations;
  size_t cuts_added;
  size_t final_parity_constraints;
  size_t rpc_cuts_added;
  size_t lp_pivots;
  double objective;
} LpdDecodeStats;

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *lpd_last_error_message(void);

struct LpdDecodeOptions lpd_decode_options_default(void);

struct LpdRpcBudget lpd_rpc_budget_default(void);

/**
 * Parses alist text (NUL-terminated) into a new code.
 *
 * # Safety
 * `text` must be a valid C string and `out` a valid pointer.
 */
enum LpdStatus lpd_code_from_alist(const char *text, struct LpdCode **out);

/**
 * Random `(dv, dc)`-regular code of length `n`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum LpdStatus lpd_code_random_regular(size_t n,
                                       size_t dv,
                                       size_t dc,
                                       uint64_t seed,
                                       struct LpdCode **out);

/**
 * Releases a code. Null is ignored.
 *
 * # Safety
 * `code` must come from this library and not be used afterwards.
 */
void lpd_code_free(struct LpdCode *code);

/**
 * Code length, or 0 for null.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t lpd_code_n(const struct LpdCode *code);

/**
 * Number of checks, or 0 for null.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t lpd_code_m(const struct LpdCode *code);

/**
 * Adaptive LP decoding. `opts` may be null for defaults; `x_out` and
 * `stats_out` may be null when not wanted.
 *
 * # Safety
 * Pointers must be valid; `gamma` and `x_out` must hold `len` doubles.
 */
enum LpdStatus lpd_decode_adaptive(const struct LpdCode *code,
                                   const double *gamma,
                                   size_t len,
                                   const struct LpdDecodeOptions *opts,
                                   double *x_out,
                                   struct LpdDecodeStats *stats_out);

/**
 * LP decoding with every parity constraint present from the start.
 *
 * # Safety
 * As [`lpd_decode_adaptive`].
 */
enum LpdStatus lpd_decode_standard(const struct LpdCode *code,
                                   const double *gamma,
                                   size_t len,
                                   const struct LpdDecodeOptions *opts,
                                   double *x_out,
                                   struct LpdDecodeStats *stats_out);

/**
 * Adaptive decoding followed by redundant-parity-check cuts. The cycle
 * search is seeded with `seed`; `budget` may be null for defaults.
 *
 * # Safety
 * As [`lpd_decode_adaptive`].
 */
enum LpdStatus lpd_decode_rpc(const struct LpdCode *code,
                              const double *gamma,
                              size_t len,
                              const struct LpdDecodeOptions *opts,
                              const struct LpdRpcBudget *budget,
                              uint64_t seed,
                              double *x_out,
                              struct LpdDecodeStats *stats_out);

/**
 * Brute-force ML decoding for codes of length at most 28.
 *
 * # Safety
 * Pointers must be valid; `codeword_out` must hold `len` bytes. `cost_out`
 * and `unique_out` may be null.
 */
enum LpdStatus lpd_ml_decode(const struct LpdCode *code,
                             const double *gamma,
                             size_t len,
                             uint8_t *codeword_out,
                             double *cost_out,
                             bool *unique_out);

/**
 * Sum-product decoding with at most `max_iterations` iterations (0 means
 * 100).
 *
 * # Safety
 * Pointers must be valid; `bits_out` must hold `len` bytes.
 * `converged_out` and `iterations_out` may be null.
 */
enum LpdStatus lpd_bp_decode(const struct LpdCode *code,
                             const double *gamma,
                             size_t len,
                             size_t max_iterations,
                             uint8_t *bits_out,
                             bool *converged_out,
                             size_t *iterations_out);

#endif  /* LPDEC_H */
