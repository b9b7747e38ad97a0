#ifndef TWISTED_ORLICZ_H
#define TWISTED_ORLICZ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TwStatus {
  TW_STATUS_OK = 0,
  TW_STATUS_NULL_POINTER = 1,
  TW_STATUS_INVALID_UTF8 = 2,
  TW_STATUS_PARSE = 3,
  TW_STATUS_INVALID_ARGUMENT = 4,
  TW_STATUS_BUDGET = 5,
  TW_STATUS_NUMERIC = 6,
  TW_STATUS_IO = 7,
  TW_STATUS_PANIC = 8,
} TwStatus;

typedef struct TwCocycle TwCocycle;

typedef struct TwFunction TwFunction;

typedef struct TwGroup TwGroup;

typedef struct TwPair TwPair;

typedef struct TwWeight TwWeight;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer is
// valid until the next `tw_*` call on the same thread.
const char *tw_last_error(void);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void tw_string_free(char *s);

// Library version as a static string.
const char *tw_version(void);

// # Safety
// `h` must be NULL or a handle from this library, not yet freed.
void tw_group_free(struct TwGroup *h);

// # Safety
// `h` must be NULL or a handle from this library, not yet freed.
void tw_pair_free(struct TwPair *h);

// # Safety
// `h` must be NULL or a handle from this library, not yet freed.
void tw_weight_free(struct TwWeight *h);

// # Safety
// `h` must be NULL or a handle from this library, not yet freed.
void tw_cocycle_free(struct TwCocycle *h);

// # Safety
// `h` must be NULL or a handle from this library, not yet freed.
void tw_function_free(struct TwFunction *h);

// Parses a group spec such as `Z^d:2`, `Zn:4x4` or `H3`.
//
// # Safety
// `spec` must be a NUL-terminated string; `out` must be writable.
enum TwStatus tw_group_parse(const char *spec, struct TwGroup **out);

// `|B(n)|`, the number of elements of word length at most `n`.
//
// # Safety
// `g` must be a live group handle; `out` must be writable.
enum TwStatus tw_group_ball_size(const struct TwGroup *g, uint32_t n, uint64_t *out);

// Word length of an element given by its coordinates.
//
// # Safety
// `g` must be a live group handle, `s` must point to `len` integers.
enum TwStatus tw_group_word_length(const struct TwGroup *g,
                                   const int64_t *s,
                                   uintptr_t len,
                                   uint32_t *out);

// Parses a Young pair such as `Lp:2` or `xlog`.
//
// # Safety
// `spec` must be a NUL-terminated string; `out` must be writable.
enum TwStatus tw_pair_parse(const char *spec, struct TwPair **out);

// # Safety
// `g` must be a live group handle, `spec` a NUL-terminated string.
enum TwStatus tw_weight_parse(const struct TwGroup *g, const char *spec, struct TwWeight **out);

// # Safety
// `w` must be a live weight handle, `s` must point to `len` integers.
enum TwStatus tw_weight_value(const struct TwWeight *w,
                              const int64_t *s,
                              uintptr_t len,
                              double *out);

// # Safety
// `g` must be a live group handle, `spec` a NUL-terminated string.
enum TwStatus tw_cocycle_parse(const struct TwGroup *g, const char *spec, struct TwCocycle **out);

// `Ω(s, t)` as real and imaginary parts.
//
// # Safety
// `c` must be a live cocycle handle; `s`, `t` must point to `len` integers.
enum TwStatus tw_cocycle_eval(const struct TwCocycle *c,
                              const int64_t *s,
                              const int64_t *t,
                              uintptr_t len,
                              double *out_re,
                              double *out_im);

// The zero function on `g`.
//
// # Safety
// `g` must be a live group handle; `out` must be writable.
enum TwStatus tw_function_new(const struct TwGroup *g, struct TwFunction **out);

// Adds `re + i im` at the element `s`.
//
// # Safety
// `f` must be a live function handle, `s` must point to `len` integers.
enum TwStatus tw_function_add(struct TwFunction *f,
                              const int64_t *s,
                              uintptr_t len,
                              double re,
                              double im);

// Number of support points.
//
// # Safety
// `f` must be a live function handle.
enum TwStatus tw_function_len(const struct TwFunction *f, uintptr_t *out);

// Parses the JSON function-file format.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum TwStatus tw_function_from_json(const char *json, struct TwFunction **out);

// Serializes to the JSON function-file format; free with `tw_string_free`.
//
// # Safety
// `f` must be a live function handle; `out` must be writable.
enum TwStatus tw_function_to_json(const struct TwFunction *f, char **out);

// Luxemburg and Orlicz norms; with a non-NULL weight both are of `fω`.
//
// # Safety
// `f`, `pair` must be live handles; `w` may be NULL; outputs must be writable.
enum TwStatus tw_norms(const struct TwFunction *f,
                       const struct TwPair *pair,
                       const struct TwWeight *w,
                       double *out_luxemburg,
                       double *out_orlicz);

// `f ⋆_Ω g`.
//
// # Safety
// All handles must be live; `out` must be writable.
enum TwStatus tw_convolve(const struct TwFunction *f,
                          const struct TwFunction *g,
                          const struct TwCocycle *omega,
                          struct TwFunction **out);

// Runs a preset suite (by name) or a suite given as JSON text. Writes the
// JSON report to `out_report` and 1/0 to `out_pass`.
//
// # Safety
// `suite` must be a NUL-terminated string; outputs must be writable.
enum TwStatus tw_run_suite(const char *suite, char **out_report, int32_t *out_pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWISTED_ORLICZ_H */
