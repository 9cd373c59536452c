#ifndef CURATOR_H
#define CURATOR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum CuratorStatus {
  CURATOR_STATUS_OK = 0,
  CURATOR_STATUS_NULL_ARGUMENT = 1,
  CURATOR_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON or an invalid request context.
   */
  CURATOR_STATUS_INVALID_INPUT = 3,
  /**
   * Knowledge-base, scenario or apx text failed to parse.
   */
  CURATOR_STATUS_PARSE_ERROR = 4,
  /**
   * No topic tag maps to a sphere.
   */
  CURATOR_STATUS_UNCLASSIFIABLE = 5,
  CURATOR_STATUS_IO = 6,
  /**
   * Framework too large for an enumerating semantics.
   */
  CURATOR_STATUS_TOO_LARGE = 7,
  /**
   * A Rust panic was caught at the boundary.
   */
  CURATOR_STATUS_INTERNAL = 8,
} CuratorStatus;

/**
 * Opaque knowledge-base handle.
 */
typedef struct CuratorKb CuratorKb;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Built-in five-argument knowledge base.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CuratorStatus curator_kb_default(struct CuratorKb **out);

/**
 * Parses knowledge-base DSL text.
 *
 * # Safety
 * `text` is a NUL-terminated string; `out` must be valid for writes.
 */
enum CuratorStatus curator_kb_parse(const char *text, struct CuratorKb **out);

/**
 * Loads a `.kb` file or an append-only knowledge-base log.
 *
 * # Safety
 * `path` is a NUL-terminated string; `out` must be valid for writes.
 */
enum CuratorStatus curator_kb_load(const char *path, struct CuratorKb **out);

/**
 * Version of the knowledge base (number of applied entries); 0 for null.
 *
 * # Safety
 * `kb` is null or a live handle.
 */
uint64_t curator_kb_version(const struct CuratorKb *kb);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `kb` is null or a handle not yet freed.
 */
void curator_kb_free(struct CuratorKb *kb);

/**
 * Decides a context given as JSON. `*out_json` receives the Decision JSON,
 * byte-identical to the CLI `--json` output and the HTTP API body.
 *
 * # Safety
 * `kb` is a live handle, `context_json` a NUL-terminated string and
 * `out_json` valid for writes.
 */
enum CuratorStatus curator_decide_json(const struct CuratorKb *kb,
                                       const char *context_json,
                                       char **out_json);

/**
 * Like [`curator_decide_json`] but returns the human-readable explanation.
 *
 * # Safety
 * Same as [`curator_decide_json`].
 */
enum CuratorStatus curator_explain_text(const struct CuratorKb *kb,
                                        const char *context_json,
                                        char **out_text);

/**
 * Solves an apx framework. `semantics` is one of `grounded`, `complete`,
 * `preferred`, `stable`. `*out_json` receives the extensions as a JSON
 * array of sorted name arrays.
 *
 * # Safety
 * `apx` and `semantics` are NUL-terminated strings; `out_json` is valid
 * for writes.
 */
enum CuratorStatus curator_af_solve(const char *apx, const char *semantics, char **out_json);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *curator_last_error_message(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` is null or a string from this library not yet freed.
 */
void curator_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CURATOR_H */
