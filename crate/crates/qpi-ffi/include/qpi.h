/* C interface for the colored-partition identity verification engine. */

#ifndef QPI_H
#define QPI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by fallible entry points.
 */
typedef enum QpiStatus {
  /**
   * The call completed.
   */
  QPI_STATUS_OK = 0,
  /**
   * A pointer was null, UTF-8 was invalid, or a value was out of range.
   */
  QPI_STATUS_INVALID_ARGUMENT = 1,
  /**
   * A certificate failed verification.
   */
  QPI_STATUS_CHECK_FAILED = 2,
  /**
   * The certificate search exhausted its window growth.
   */
  QPI_STATUS_WINDOW_EXHAUSTED = 3,
  /**
   * The library caught an internal panic.
   */
  QPI_STATUS_PANIC = 4,
} QpiStatus;

/**
 * Opaque handle holding the reports of one verification run.
 */
typedef struct QpiReportSet QpiReportSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *qpi_last_error(void);

/**
 * Library version as a static string; never freed by the caller.
 */
const char *qpi_version(void);

/**
 * Run every verification chain at the given series order.
 *
 * # Safety
 * `out` must be a valid pointer to receive the handle.
 */
enum QpiStatus qpi_verify_all(uint32_t order, struct QpiReportSet **out);

/**
 * Run one identity's chain; `which` must be 1 or 2.
 *
 * # Safety
 * `out` must be a valid pointer to receive the handle.
 */
enum QpiStatus qpi_verify_theorem(uint8_t which, uint32_t order, struct QpiReportSet **out);

/**
 * Compare the weighted count table against its conjectured sum side
 * (finite-order evidence only).
 *
 * # Safety
 * `out` must be a valid pointer to receive the handle.
 */
enum QpiStatus qpi_verify_conjecture(uint32_t order, struct QpiReportSet **out);

/**
 * Check the classical sanity identities.
 *
 * # Safety
 * `out` must be a valid pointer to receive the handle.
 */
enum QpiStatus qpi_verify_sanity(uint32_t order, struct QpiReportSet **out);

/**
 * True iff every check in the run passed.
 *
 * # Safety
 * `handle` must come from a `qpi_verify_*` call and not be freed yet.
 */
bool qpi_report_passed(const struct QpiReportSet *handle);

/**
 * Process-style exit code for the run: 0 all passed, 2 any failure,
 * 3 a certificate search exhausted its window.
 *
 * # Safety
 * `handle` must come from a `qpi_verify_*` call and not be freed yet.
 */
int32_t qpi_report_exit_code(const struct QpiReportSet *handle);

/**
 * The run's reports as a JSON array; free with `qpi_string_free`.
 * Returns null on internal failure.
 *
 * # Safety
 * `handle` must come from a `qpi_verify_*` call and not be freed yet.
 */
char *qpi_report_json(const struct QpiReportSet *handle);

/**
 * The run's reports rendered as human-readable text; free with
 * `qpi_string_free`. Returns null on internal failure.
 *
 * # Safety
 * `handle` must come from a `qpi_verify_*` call and not be freed yet.
 */
char *qpi_report_text(const struct QpiReportSet *handle);

/**
 * Release a run handle. Null is allowed and ignored.
 *
 * # Safety
 * `handle` must come from a `qpi_verify_*` call and not be freed twice.
 */
void qpi_report_free(struct QpiReportSet *handle);

/**
 * Release a string returned by this library. Null is allowed and ignored.
 *
 * # Safety
 * `text` must come from this library and not be freed twice.
 */
void qpi_string_free(char *text);

/**
 * The admissible colored partitions of `n`, one per line (`5R+1G` style),
 * honoring the comma-separated forbidden parts in `forbid` (empty string
 * forbids nothing). Free with `qpi_string_free`; null on error.
 *
 * # Safety
 * `forbid` must be null (treated as empty) or a NUL-terminated string.
 */
char *qpi_enumerate(uint32_t n, const char *forbid);

/**
 * One triple multisum evaluated through `order`, as the series' JSON
 * encoding. `family` is "S" or "T"; `x_at_one` nonzero specializes x = 1.
 * Free with `qpi_string_free`; null on error.
 *
 * # Safety
 * `family` must be a NUL-terminated string.
 */
char *qpi_multisum(const char *family,
                   uint32_t a,
                   uint32_t b,
                   uint32_t c,
                   uint32_t order,
                   bool x_at_one);

/**
 * Search for a certificate for a named target equation ("proofA" …
 * "proofE") and write its JSON to `out_json` (free with
 * `qpi_string_free`). The found certificate is re-verified before being
 * returned.
 *
 * # Safety
 * `target` must be a NUL-terminated string; `out_json` must be a valid
 * pointer to receive the string.
 */
enum QpiStatus qpi_certificate_find(const char *target, char **out_json);

/**
 * Verify a certificate given as JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string.
 */
enum QpiStatus qpi_certificate_check(const char *json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QPI_H */
