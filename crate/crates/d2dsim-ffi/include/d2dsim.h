#ifndef D2DSIM_H
#define D2DSIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Selector for the two printed forms of the cellular outage.
 */
#define D2DSIM_VARIANT_LITERAL 0

#define D2DSIM_VARIANT_CORRECTED 1

/**
 * Status code returned by every fallible call.
 */
typedef enum D2dsimStatus {
  D2DSIM_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  D2DSIM_STATUS_NULL_POINTER = 1,
  /**
   * The config JSON failed to parse or was not UTF-8.
   */
  D2DSIM_STATUS_INVALID_JSON = 2,
  /**
   * The config parsed but violated a parameter constraint.
   */
  D2DSIM_STATUS_INVALID_CONFIG = 3,
  /**
   * A scalar argument was out of domain.
   */
  D2DSIM_STATUS_INVALID_ARGUMENT = 4,
} D2dsimStatus;

/**
 * Opaque handle to a validated system configuration.
 */
typedef struct D2dsimConfig D2dsimConfig;

/**
 * Monte Carlo estimate returned by `d2dsim_estimate_outage`.
 */
typedef struct D2dsimEstimate {
  uint64_t trials;
  /**
   * Empirical cellular outage probability and its 99% half-width.
   */
  double p_oc;
  double p_oc_ci;
  /**
   * Empirical D2D outage probability and its 99% half-width.
   */
  double p_od;
  double p_od_ci;
  /**
   * Trials ending in operating case 1..4.
   */
  uint64_t cases[4];
} D2dsimEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a config with the built-in baseline parameters.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum D2dsimStatus d2dsim_config_default(struct D2dsimConfig **out);

/**
 * Parse a JSON config document (same schema as the CLI `--config` file).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for
 * writing one pointer.
 */
enum D2dsimStatus d2dsim_config_from_json(const char *json, struct D2dsimConfig **out);

/**
 * Free a config handle. Null is a no-op.
 *
 * # Safety
 * `cfg` must have come from a `d2dsim_config_*` constructor and must not
 * be used afterwards.
 */
void d2dsim_config_free(struct D2dsimConfig *cfg);

/**
 * Modified Bessel function of the second kind, order one.
 * `x <= 0` or non-finite input yields `D2DSIM_STATUS_INVALID_ARGUMENT`.
 *
 * # Safety
 * `out` must be valid for writing one double.
 */
enum D2dsimStatus d2dsim_bessel_k1(double x, double *out);

/**
 * Closed-form cellular outage probability for the given variant
 * (`D2DSIM_VARIANT_LITERAL` or `D2DSIM_VARIANT_CORRECTED`).
 *
 * # Safety
 * `cfg` must be a live config handle; `out` must be valid for writing
 * one double.
 */
enum D2dsimStatus d2dsim_cellular_outage(const struct D2dsimConfig *cfg, int variant, double *out);

/**
 * Closed-form D2D outage probability (printed four-branch form).
 *
 * # Safety
 * `cfg` must be a live config handle; `out` must be valid for writing
 * one double.
 */
enum D2dsimStatus d2dsim_d2d_outage(const struct D2dsimConfig *cfg, double *out);

/**
 * Alpha feasibility bounds `(1 - delta, 1 - mu)`. Values at or below 0
 * (including -inf) mean no feasible alpha exists for that path.
 *
 * # Safety
 * `cfg` must be a live config handle; both out-pointers must be valid
 * for writing one double each.
 */
enum D2dsimStatus d2dsim_alpha_bounds(const struct D2dsimConfig *cfg,
                                      double *delta_bound,
                                      double *mu_bound);

/**
 * Monte Carlo outage estimate over `trials` seeded trials. The result
 * is bit-identical for a fixed `(seed, trials)` regardless of `workers`.
 *
 * # Safety
 * `cfg` must be a live config handle; `out` must be valid for writing
 * one `D2dsimEstimate`.
 */
enum D2dsimStatus d2dsim_estimate_outage(const struct D2dsimConfig *cfg,
                                         uint64_t trials,
                                         uint64_t seed,
                                         uint32_t workers,
                                         struct D2dsimEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* D2DSIM_H */
