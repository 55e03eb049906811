#ifndef SOSK49_H
#define SOSK49_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum Sosk49Status {
  SOSK49_STATUS_OK = 0,
  SOSK49_STATUS_NULL_POINTER = 1,
  SOSK49_STATUS_INVALID_UTF8 = 2,
  SOSK49_STATUS_PARSE = 3,
  SOSK49_STATUS_INVALID_ORDER = 4,
  SOSK49_STATUS_ARITHMETIC = 5,
  SOSK49_STATUS_UNSUPPORTED = 6,
  SOSK49_STATUS_VIOLATION = 7,
  SOSK49_STATUS_FAILED = 8,
  SOSK49_STATUS_PANIC = 9,
} Sosk49Status;

/**
 * Opaque handle to an element of an order.
 */
typedef struct Sosk49Element Sosk49Element;

/**
 * Opaque handle to a cubic order.
 */
typedef struct Sosk49Order Sosk49Order;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *sosk49_status_message(enum Sosk49Status status);

/**
 * Message of the last failure on this thread, or null. Owned by the library.
 */
const char *sosk49_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void sosk49_string_free(char *s);

/**
 * Order defined by `x³ + p·x² + q·x + r`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum Sosk49Status sosk49_order_new(int64_t p, int64_t q, int64_t r, struct Sosk49Order **out);

/**
 * The order `Z[ρ]`, `ρ³ + ρ² − 2ρ − 1 = 0`.
 */
struct Sosk49Order *sosk49_order_k49(void);

/**
 * # Safety
 * `order` must be null or a handle from this library, not yet freed.
 */
void sosk49_order_free(struct Sosk49Order *order);

/**
 * Parses `a + b*r + c*r^2` or `[a, b, c]`.
 *
 * # Safety
 * `order` must be a live handle, `text` a nul-terminated string and `out`
 * valid for writes.
 */
enum Sosk49Status sosk49_element_parse(const struct Sosk49Order *order,
                                       const char *text,
                                       struct Sosk49Element **out);

/**
 * `a + b·θ + c·θ²`, or null when `order` is null.
 *
 * # Safety
 * `order` must be null or a live handle.
 */
struct Sosk49Element *sosk49_element_from_coords(const struct Sosk49Order *order,
                                                 int64_t a,
                                                 int64_t b,
                                                 int64_t c);

/**
 * # Safety
 * `e` must be null or a handle from this library, not yet freed.
 */
void sosk49_element_free(struct Sosk49Element *e);

/**
 * Text form `a + b*r + c*r^2`; free with [`sosk49_string_free`]. Null when
 * `e` is null.
 *
 * # Safety
 * `e` must be null or a live handle.
 */
char *sosk49_element_to_string(const struct Sosk49Element *e);

/**
 * # Safety
 * `a`, `b` must be live handles and `out` valid for writes.
 */
enum Sosk49Status sosk49_element_add(const struct Sosk49Element *a,
                                     const struct Sosk49Element *b,
                                     struct Sosk49Element **out);

/**
 * # Safety
 * `a`, `b` must be live handles and `out` valid for writes.
 */
enum Sosk49Status sosk49_element_mul(const struct Sosk49Element *a,
                                     const struct Sosk49Element *b,
                                     struct Sosk49Element **out);

/**
 * # Safety
 * `e` must be a live handle and `out` valid for writes.
 */
enum Sosk49Status sosk49_element_is_totally_positive(const struct Sosk49Element *e, bool *out);

/**
 * Decimal norm; free with [`sosk49_string_free`]. Null when `e` is null.
 *
 * # Safety
 * `e` must be null or a live handle.
 */
char *sosk49_element_norm(const struct Sosk49Element *e);

/**
 * Decimal trace; free with [`sosk49_string_free`]. Null when `e` is null.
 *
 * # Safety
 * `e` must be null or a live handle.
 */
char *sosk49_element_trace(const struct Sosk49Element *e);

/**
 * Length of `e`; writes -1 when `e` is not a sum of squares and -2 when no
 * decomposition was found up to the length cap.
 *
 * # Safety
 * `e` must be a live handle and `out` valid for writes.
 */
enum Sosk49Status sosk49_length(const struct Sosk49Element *e, int32_t *out);

/**
 * Length document `{"target":..,"length":..,"witness":..,"certificate":..}`.
 *
 * # Safety
 * `e` must be a live handle and `out` valid for writes.
 */
enum Sosk49Status sosk49_length_json(const struct Sosk49Element *e, char **out);

/**
 * Classification of a totally positive element as JSON.
 *
 * # Safety
 * `e` must be a live handle and `out` valid for writes.
 */
enum Sosk49Status sosk49_classify_json(const struct Sosk49Element *e, char **out);

/**
 * Dyadic data `{"v2":..,"isSquare":..,"isMinusSquare":..,"representsI3":..}`.
 *
 * # Safety
 * `e` must be a live handle and `out` valid for writes.
 */
enum Sosk49Status sosk49_local_json(const struct Sosk49Element *e, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SOSK49_H */
