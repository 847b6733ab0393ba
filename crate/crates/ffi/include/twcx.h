#ifndef TWCX_H
#define TWCX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. Values are stable.
typedef enum TwcxStatus {
  TWCX_STATUS_OK = 0,
  // A required pointer argument was null.
  TWCX_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  TWCX_STATUS_INVALID_UTF8 = 2,
  // The bundle text could not be parsed or resolved.
  TWCX_STATUS_PARSE = 3,
  // Inputs do not fit together (shapes, names, degrees).
  TWCX_STATUS_STRUCTURAL = 4,
  // The computation needs data beyond the truncation level.
  TWCX_STATUS_TRUNCATION = 5,
  // An internal self-check or mathematical precondition failed.
  TWCX_STATUS_MATH = 6,
  TWCX_STATUS_IO = 7,
  // The library panicked; this is a bug.
  TWCX_STATUS_PANIC = 8,
} TwcxStatus;

// A parsed instance bundle.
typedef struct TwcxBundle TwcxBundle;

// A verification report.
typedef struct TwcxReport TwcxReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a bundle from JSON text.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum TwcxStatus twcx_bundle_parse(const char *json, struct TwcxBundle **out);

// Reads and parses a bundle file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum TwcxStatus twcx_bundle_load(const char *path, struct TwcxBundle **out);

// Canonical JSON of a bundle.
//
// # Safety
// `bundle` must come from this library; `out` must be writable.
enum TwcxStatus twcx_bundle_to_json(const struct TwcxBundle *bundle, char **out);

// # Safety
// `bundle` must be null or come from this library, and not be used again.
void twcx_bundle_free(struct TwcxBundle *bundle);

// Runs every validator on the bundle.
//
// # Safety
// `bundle` must come from this library; `out` must be writable.
enum TwcxStatus twcx_validate(const struct TwcxBundle *bundle, struct TwcxReport **out);

// Builds the transformation induced by a homotopy and verifies it on a
// probe. `homotopy` may be null when the bundle has exactly one.
//
// # Safety
// Pointers must be valid as documented; `out` must be writable.
enum TwcxStatus twcx_phi(const struct TwcxBundle *bundle,
                         const char *homotopy,
                         const char *probe,
                         size_t max_level,
                         struct TwcxReport **out);

// Searches for a homotopy inverse of a named closed degree-0 morphism.
//
// # Safety
// Pointers must be valid as documented; `out` must be writable.
enum TwcxStatus twcx_ho_invert(const struct TwcxBundle *bundle,
                               const char *morphism,
                               struct TwcxReport **out);

// `1` if every check passed, `0` if not, `-1` for a null handle.
//
// # Safety
// `report` must be null or come from this library.
int twcx_report_passed(const struct TwcxReport *report);

// The report as JSON.
//
// # Safety
// `report` must come from this library; `out` must be writable.
enum TwcxStatus twcx_report_json(const struct TwcxReport *report, char **out);

// # Safety
// `report` must be null or come from this library, and not be used again.
void twcx_report_free(struct TwcxReport *report);

// Generates a seeded bundle with default sizes. `modulus` is `0` for the
// rationals or a prime for GF(p). Writes canonical JSON to `out`.
//
// # Safety
// `out` must be writable.
enum TwcxStatus twcx_generate(uint64_t seed, uint64_t modulus, char **out);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void twcx_string_free(char *s);

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next call into the library on this thread.
const char *twcx_last_error(void);

// Library version as a static NUL-terminated string.
const char *twcx_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWCX_H */
