/* C interface for the fairpart convex fair-partition solvers. */

#pragma once

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum FpStatus {
  FP_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  FP_STATUS_NULL_ARGUMENT = 1,
  /**
   * The vertex list does not describe a convex polygon.
   */
  FP_STATUS_INVALID_POLYGON = 2,
  /**
   * The requested piece count is not a power of two >= 2.
   */
  FP_STATUS_UNSUPPORTED_COUNT = 3,
  /**
   * The solver gave up on valid input (verification, budget, topology).
   */
  FP_STATUS_SOLVER_FAILED = 4,
  /**
   * An index argument was out of range.
   */
  FP_STATUS_OUT_OF_RANGE = 5,
  /**
   * An internal panic was caught at the boundary.
   */
  FP_STATUS_PANIC = 6,
} FpStatus;

/**
 * Opaque convex polygon handle.
 */
typedef struct FpPolygon FpPolygon;

/**
 * Opaque fair-partition result handle.
 */
typedef struct FpResult FpResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Build a polygon from `vertex_count` (x, y) pairs laid out as
 * `x0 y0 x1 y1 ...`. Clockwise input is reversed; non-convex input fails
 * with `FP_STATUS_INVALID_POLYGON`.
 *
 * # Safety
 * `xy` must point to `2 * vertex_count` readable doubles and `out` to a
 * writable pointer slot. On success `*out` owns the polygon and must be
 * released with [`fp_polygon_free`].
 */
enum FpStatus fp_polygon_new(const double *xy, uintptr_t vertex_count, struct FpPolygon **out);

/**
 * # Safety
 * `poly` must be null or a pointer obtained from [`fp_polygon_new`] that
 * has not been freed yet.
 */
void fp_polygon_free(struct FpPolygon *poly);

/**
 * Number of vertices, 0 for null.
 *
 * # Safety
 * `poly` must be null or a live polygon handle.
 */
uintptr_t fp_polygon_vertex_count(const struct FpPolygon *poly);

/**
 * Partition into `pieces` fair pieces (equal area and perimeter, all
 * convex). `pieces` must be a power of two >= 2. `theta_samples` sets the
 * rotation grid; pass 0 for the default.
 *
 * # Safety
 * `poly` must be a live polygon handle and `out` a writable pointer slot.
 * On success `*out` owns the result and must be released with
 * [`fp_result_free`].
 */
enum FpStatus fp_fair_partition(const struct FpPolygon *poly,
                                uint64_t pieces,
                                uintptr_t theta_samples,
                                struct FpResult **out);

/**
 * Number of pieces, 0 for null.
 *
 * # Safety
 * `result` must be null or a live result handle.
 */
uintptr_t fp_result_piece_count(const struct FpResult *result);

/**
 * Achieved relative spreads of the partition.
 *
 * # Safety
 * `result` must be a live result handle; `area_spread` and
 * `perimeter_spread` must be writable or null (null skips that output).
 */
enum FpStatus fp_result_spreads(const struct FpResult *result,
                                double *area_spread,
                                double *perimeter_spread);

/**
 * Vertex count of one piece, 0 when `result` is null or `piece` is out of
 * range.
 *
 * # Safety
 * `result` must be null or a live result handle.
 */
uintptr_t fp_result_piece_vertex_count(const struct FpResult *result, uintptr_t piece);

/**
 * Copy one piece's vertices as `x0 y0 x1 y1 ...` into `xy`.
 * `capacity` counts doubles; on success `*written` (if non-null) receives
 * the number of doubles stored.
 *
 * # Safety
 * `result` must be a live result handle and `xy` writable for `capacity`
 * doubles.
 */
enum FpStatus fp_result_piece_vertices(const struct FpResult *result,
                                       uintptr_t piece,
                                       double *xy,
                                       uintptr_t capacity,
                                       uintptr_t *written);

/**
 * Serialize the full result (pieces, cut tree, verification report) to a
 * NUL-terminated JSON string.
 *
 * # Safety
 * `result` must be a live result handle and `out` a writable pointer slot.
 * On success `*out` must be released with [`fp_string_free`].
 */
enum FpStatus fp_result_to_json(const struct FpResult *result, char **out);

/**
 * # Safety
 * `text` must be null or a pointer obtained from [`fp_result_to_json`]
 * that has not been freed yet.
 */
void fp_string_free(char *text);

/**
 * # Safety
 * `result` must be null or a pointer obtained from [`fp_fair_partition`]
 * that has not been freed yet.
 */
void fp_result_free(struct FpResult *result);

/**
 * Static name for a status code, for diagnostics.
 */
const char *fp_status_name(enum FpStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
