/* C interface for the whitcell library. */

#ifndef WHITCELL_H
#define WHITCELL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every entry point.
enum WhitcellStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  WHITCELL_STATUS_OK = 0,
  WHITCELL_STATUS_INVALID_ARGUMENT = 1,
  WHITCELL_STATUS_INVALID_RANK = 2,
  WHITCELL_STATUS_UNSUPPORTED_TYPE = 3,
  WHITCELL_STATUS_RANK_TOO_LARGE = 4,
  WHITCELL_STATUS_WRONG_TYPE = 5,
  WHITCELL_STATUS_VERIFICATION_FAILED = 6,
  WHITCELL_STATUS_BOUND_EXCEEDED = 7,
  WHITCELL_STATUS_INTERNAL_ERROR = 8,
};
#ifndef __cplusplus
typedef int32_t WhitcellStatus;
#endif // __cplusplus

// Opaque root-system handle.
typedef struct WhitcellDatum WhitcellDatum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a root-system handle. `type_label` is one of "A","B","C","D","G2".
//
// # Safety
// `type_label` must be a NUL-terminated string and `out` a valid pointer.
WhitcellStatus whitcell_datum_new(const char *type_label,
                                  uint32_t rank,
                                  struct WhitcellDatum **out);

// Releases a handle created by `whitcell_datum_new`.
//
// # Safety
// `datum` must come from `whitcell_datum_new` and not be freed twice.
void whitcell_datum_free(struct WhitcellDatum *datum);

// Serializes the root-system data as JSON.
//
// # Safety
// `datum` must be a live handle; `out_json` a valid pointer.
WhitcellStatus whitcell_datum_json(const struct WhitcellDatum *datum, char **out_json);

// Whittaker polynomial for the subset specifier (same syntax as the CLI):
// JSON with exact coefficients, splitting flag and rational roots.
//
// # Safety
// Pointer arguments as for `whitcell_datum_json`; `subset` NUL-terminated.
WhitcellStatus whitcell_whittaker_json(const struct WhitcellDatum *datum,
                                       const char *subset,
                                       char **out_json);

// Descent-class report (phi, a-values, special orbits) as JSON.
//
// # Safety
// As for `whitcell_whittaker_json`.
WhitcellStatus whitcell_report_json(const struct WhitcellDatum *datum,
                                    const char *subset,
                                    char **out_json);

// Runs the two-sided-cell table verification; emits the JSON report and
// returns `VerificationFailed` when any row fails.
//
// # Safety
// As for `whitcell_datum_json`.
WhitcellStatus whitcell_verify_tables_json(const struct WhitcellDatum *datum, char **out_json);

// Full speculation scan over every subset, as JSON.
//
// # Safety
// As for `whitcell_datum_json`.
WhitcellStatus whitcell_scan_json(const struct WhitcellDatum *datum, char **out_json);

// Checks the fixed-point formula chi(w) = n^{d(w)} over the whole group;
// writes 1 to `out_ok` when every element matches.
//
// # Safety
// As for `whitcell_datum_json`; `out_ok` must be a valid pointer.
WhitcellStatus whitcell_oracle_check(const struct WhitcellDatum *datum,
                                     uint64_t n,
                                     int32_t *out_ok);

// Frees a string returned by any `_json` entry point.
//
// # Safety
// `s` must come from this library and not be freed twice.
void whitcell_string_free(char *s);

// Static name for a status code.
const char *whitcell_status_name(WhitcellStatus status);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* WHITCELL_H */
