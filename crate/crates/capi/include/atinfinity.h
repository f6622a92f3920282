#ifndef ATINFINITY_H
#define ATINFINITY_H

/* Generated by cbindgen from the atinfinity-capi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define ATINF_OK 0

#define ATINF_ERR_INPUT 2

#define ATINF_ERR_GUARD 3

#define ATINF_ERR_ARGUMENT -1

#define ATINF_ERR_PANIC -2

/**
 * Opaque analysis report handle.
 */
typedef struct AtinfReport AtinfReport;

/**
 * Analysis options. Obtain defaults from `atinf_config_default` and
 * override fields as needed.
 */
typedef struct AtinfConfig {
  /**
   * Run the non-degeneracy-at-infinity check (0/1).
   */
  int check_nd;
  /**
   * Compute bound sets and the invertibility verdict (0/1).
   */
  int bound;
  /**
   * Compare the two non-degeneracy forms; real setting only (0/1).
   */
  int compare_definitions;
  /**
   * Run the numeric asymptotic-value search (0/1).
   */
  int numeric;
  /**
   * Translate away nonzero constant terms instead of rejecting (0/1).
   */
  int translate;
  /**
   * Seed for all randomized stages.
   */
  uint64_t seed;
  /**
   * Residual tolerance override; pass 0 or a negative value for the default.
   */
  double tol;
  /**
   * Initial sphere radius for the numeric search.
   */
  double radius0;
  /**
   * Multiplicative radius factor (> 1).
   */
  double radius_factor;
  /**
   * Number of radii in the schedule.
   */
  size_t radius_count;
  /**
   * Restarts per radius.
   */
  size_t restarts;
} AtinfConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the default configuration.
 */
struct AtinfConfig atinf_config_default(void);

/**
 * Analyzes mapping source text.
 *
 * On success writes a report handle to `out_report` and returns 0. On
 * failure returns a nonzero status and, when `out_error` is non-null,
 * writes an owned error-message string there (free it with
 * `atinf_string_free`). `out_report` must be non-null; `out_error` may
 * be null.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string, and the out-pointers
 * must be valid for writes when non-null.
 */
int atinf_analyze(const char *text,
                  const struct AtinfConfig *config,
                  struct AtinfReport **out_report,
                  char **out_error);

/**
 * Returns the report's JSON document as an owned string (free with
 * `atinf_string_free`), or null if `report` is null.
 *
 * # Safety
 * `report` must be a handle returned by `atinf_analyze` that has not
 * been freed.
 */
char *atinf_report_json(const struct AtinfReport *report);

/**
 * Returns the report's human-readable summary as an owned string (free
 * with `atinf_string_free`), or null if `report` is null.
 *
 * # Safety
 * `report` must be a handle returned by `atinf_analyze` that has not
 * been freed.
 */
char *atinf_report_summary(const struct AtinfReport *report);

/**
 * Frees a report handle. Null is ignored.
 *
 * # Safety
 * `report` must be a handle returned by `atinf_analyze`, freed at most
 * once.
 */
void atinf_report_free(struct AtinfReport *report);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be a string returned by this library, freed at most once.
 */
void atinf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ATINFINITY_H */
