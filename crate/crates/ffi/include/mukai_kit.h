#ifndef MUKAI_KIT_H
#define MUKAI_KIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every exported function. The first three values agree
 * with the command line exit codes.
 */
typedef enum MkStatus {
  MK_STATUS_OK = 0,
  MK_STATUS_INVALID_INPUT = 1,
  MK_STATUS_REGIME_FAILURE = 2,
  MK_STATUS_NULL_POINTER = 3,
  MK_STATUS_INVALID_UTF8 = 4,
  MK_STATUS_PANIC = 5,
} MkStatus;

/**
 * Loaded configuration. Opaque to C.
 */
typedef struct MkConfig MkConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON configuration. On success `*out` receives a handle to be
 * released with [`mk_config_free`].
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MkStatus mk_config_from_json(const char *json, struct MkConfig **out);

/**
 * Reads and parses a JSON configuration file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MkStatus mk_config_from_path(const char *path, struct MkConfig **out);

/**
 * # Safety
 * `cfg` must be null or a handle from this library not yet freed.
 */
void mk_config_free(struct MkConfig *cfg);

/**
 * Runs a command (`"pair"`, `"walls-scan"`, ...) with flags given as a JSON
 * object keyed like the long options (`{"v": "1,0,0,1", "ell": "2"}`).
 * `args_json` may be null for no flags. The JSON report is written to
 * `*out` whenever the command ran, including regime failures.
 *
 * # Safety
 * String arguments must be NUL-terminated; `cfg` must be a live handle.
 */
enum MkStatus mk_run(const struct MkConfig *cfg,
                     const char *command,
                     const char *args_json,
                     char **out);

/**
 * Mukai pairing of two comma-separated vectors `r,ξ_1,...,ξ_n,s`. The
 * exact value is written to `*out` as `p/q`.
 *
 * # Safety
 * String arguments must be NUL-terminated; `cfg` must be a live handle.
 */
enum MkStatus mk_pair(const struct MkConfig *cfg, const char *u, const char *v, char **out);

/**
 * Image of a comma-separated vector under the configured transform,
 * written to `*out` in the same comma-separated form.
 *
 * # Safety
 * String arguments must be NUL-terminated; `cfg` must be a live handle.
 */
enum MkStatus mk_fm_apply(const struct MkConfig *cfg, const char *v, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void mk_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *mk_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mk_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MUKAI_KIT_H */
