#ifndef THETA_ANOMALY_H
#define THETA_ANOMALY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TaError {
  TA_ERROR_OK = 0,
  TA_ERROR_NULL_POINTER = 1,
  TA_ERROR_INVALID_UTF8 = 2,
  TA_ERROR_INVALID_ARGUMENT = 3,
  TA_ERROR_INSUFFICIENT_ORDER = 4,
  TA_ERROR_COMPUTATION = 5,
  TA_ERROR_PANIC = 6,
} TaError;

typedef enum TaStatus {
  TA_STATUS_PASS = 0,
  TA_STATUS_PASS_WITH_VARIANT = 1,
  TA_STATUS_GAP = 2,
  TA_STATUS_FAIL = 3,
} TaStatus;

typedef enum TaBasis {
  TA_BASIS_NORMALIZED = 0,
  TA_BASIS_STANDARD = 1,
} TaBasis;

/**
 * Opaque verification report.
 */
typedef struct TaReport TaReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Verifies a theorem (e.g. `"3.1"`) or divisibility corollary (e.g.
 * `"4.9"`). Pass `k = 0` for statements fixed to one dimension and
 * `qorder = 0` for the default truncation. `m` is only read for
 * divisibility corollaries. On success `*out` receives a new report.
 *
 * # Safety
 * `theorem` must be a valid NUL-terminated string and `out` a valid
 * pointer to writable storage.
 */
enum TaError ta_verify(const char *theorem,
                       uint32_t k,
                       uint32_t l,
                       uint32_t qorder,
                       uint32_t m,
                       struct TaReport **out);

/**
 * Overall verdict of a report.
 *
 * # Safety
 * `report` must be null or a handle from `ta_verify` not yet freed.
 */
enum TaError ta_report_status(const struct TaReport *report, enum TaStatus *status);

/**
 * Number of `h_r` coefficients in a report.
 *
 * # Safety
 * `report` must be null or a live handle from `ta_verify`.
 */
uintptr_t ta_report_h_count(const struct TaReport *report);

/**
 * JSON form of a report, with polynomials rendered in `basis`. The string
 * must be released with `ta_string_free`.
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum TaError ta_report_json(const struct TaReport *report, enum TaBasis basis, char **out);

/**
 * # Safety
 * `report` must be null or a handle from `ta_verify` not yet freed.
 */
void ta_report_free(struct TaReport *report);

/**
 * Runs the command-line interface in-process. `argv` excludes the program
 * name. Standard output is captured into `*output` (release with
 * `ta_string_free`); the command's exit code is stored in `*exit_code`.
 *
 * # Safety
 * `argv` must point to `argc` valid NUL-terminated strings; `output` and
 * `exit_code` must be valid pointers.
 */
enum TaError ta_cli_run(const char *const *argv, uintptr_t argc, char **output, int32_t *exit_code);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ta_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *ta_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *ta_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THETA_ANOMALY_H */
