//! C ABI for the fair-partition solvers.
//!
//! Conventions: every fallible entry point returns an [`FpStatus`] and
//! writes its result through an out-pointer; handles are opaque and must be
//! released exactly once with the matching `*_free`; panics never cross the
//! boundary (they are caught and reported as `FP_STATUS_PANIC`).

use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fairpart::{fair_partition, Error, FairPartitionResult, Point, Polygon, SolverConfig};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FpStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// The vertex list does not describe a convex polygon.
    InvalidPolygon = 2,
    /// The requested piece count is not a power of two >= 2.
    UnsupportedCount = 3,
    /// The solver gave up on valid input (verification, budget, topology).
    SolverFailed = 4,
    /// An index argument was out of range.
    OutOfRange = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
}

/// Opaque convex polygon handle.
pub struct FpPolygon {
    inner: Polygon,
}

/// Opaque fair-partition result handle.
pub struct FpResult {
    inner: FairPartitionResult,
}

fn status_of(err: &Error) -> FpStatus {
    match err {
        Error::DegeneratePolygon(_)
        | Error::NotConvex { .. }
        | Error::SelfWinding
        | Error::InvalidInput(_) => FpStatus::InvalidPolygon,
        Error::UnsupportedPieceCount { .. } => FpStatus::UnsupportedCount,
        _ => FpStatus::SolverFailed,
    }
}

fn guarded(body: impl FnOnce() -> FpStatus) -> FpStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(FpStatus::Panic)
}

/// Build a polygon from `vertex_count` (x, y) pairs laid out as
/// `x0 y0 x1 y1 ...`. Clockwise input is reversed; non-convex input fails
/// with `FP_STATUS_INVALID_POLYGON`.
///
/// # Safety
/// `xy` must point to `2 * vertex_count` readable doubles and `out` to a
/// writable pointer slot. On success `*out` owns the polygon and must be
/// released with [`fp_polygon_free`].
#[no_mangle]
pub unsafe extern "C" fn fp_polygon_new(
    xy: *const f64,
    vertex_count: usize,
    out: *mut *mut FpPolygon,
) -> FpStatus {
    if xy.is_null() || out.is_null() {
        return FpStatus::NullArgument;
    }
    let coords = std::slice::from_raw_parts(xy, 2 * vertex_count);
    guarded(|| {
        let verts = coords.chunks_exact(2).map(|c| Point::new(c[0], c[1])).collect();
        match Polygon::new(verts) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(FpPolygon { inner }));
                FpStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `poly` must be null or a pointer obtained from [`fp_polygon_new`] that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn fp_polygon_free(poly: *mut FpPolygon) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Number of vertices, 0 for null.
///
/// # Safety
/// `poly` must be null or a live polygon handle.
#[no_mangle]
pub unsafe extern "C" fn fp_polygon_vertex_count(poly: *const FpPolygon) -> usize {
    if poly.is_null() {
        return 0;
    }
    (*poly).inner.vertex_count()
}

/// Partition into `pieces` fair pieces (equal area and perimeter, all
/// convex). `pieces` must be a power of two >= 2. `theta_samples` sets the
/// rotation grid; pass 0 for the default.
///
/// # Safety
/// `poly` must be a live polygon handle and `out` a writable pointer slot.
/// On success `*out` owns the result and must be released with
/// [`fp_result_free`].
#[no_mangle]
pub unsafe extern "C" fn fp_fair_partition(
    poly: *const FpPolygon,
    pieces: u64,
    theta_samples: usize,
    out: *mut *mut FpResult,
) -> FpStatus {
    if poly.is_null() || out.is_null() {
        return FpStatus::NullArgument;
    }
    let poly = &(*poly).inner;
    guarded(|| {
        let mut cfg = SolverConfig::default();
        if theta_samples > 0 {
            cfg.theta_samples = theta_samples;
        }
        match fair_partition(poly, pieces, &cfg) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(FpResult { inner }));
                FpStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Number of pieces, 0 for null.
///
/// # Safety
/// `result` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn fp_result_piece_count(result: *const FpResult) -> usize {
    if result.is_null() {
        return 0;
    }
    (*result).inner.pieces.len()
}

/// Achieved relative spreads of the partition.
///
/// # Safety
/// `result` must be a live result handle; `area_spread` and
/// `perimeter_spread` must be writable or null (null skips that output).
#[no_mangle]
pub unsafe extern "C" fn fp_result_spreads(
    result: *const FpResult,
    area_spread: *mut f64,
    perimeter_spread: *mut f64,
) -> FpStatus {
    if result.is_null() {
        return FpStatus::NullArgument;
    }
    let (da, dp) = (*result).inner.residuals();
    if !area_spread.is_null() {
        *area_spread = da;
    }
    if !perimeter_spread.is_null() {
        *perimeter_spread = dp;
    }
    FpStatus::Ok
}

/// Vertex count of one piece, 0 when `result` is null or `piece` is out of
/// range.
///
/// # Safety
/// `result` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn fp_result_piece_vertex_count(
    result: *const FpResult,
    piece: usize,
) -> usize {
    if result.is_null() {
        return 0;
    }
    let pieces = &(*result).inner.pieces;
    pieces.get(piece).map_or(0, |p| p.vertex_count())
}

/// Copy one piece's vertices as `x0 y0 x1 y1 ...` into `xy`.
/// `capacity` counts doubles; on success `*written` (if non-null) receives
/// the number of doubles stored.
///
/// # Safety
/// `result` must be a live result handle and `xy` writable for `capacity`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn fp_result_piece_vertices(
    result: *const FpResult,
    piece: usize,
    xy: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> FpStatus {
    if result.is_null() || xy.is_null() {
        return FpStatus::NullArgument;
    }
    let pieces = &(*result).inner.pieces;
    let Some(poly) = pieces.get(piece) else {
        return FpStatus::OutOfRange;
    };
    let needed = 2 * poly.vertex_count();
    if capacity < needed {
        return FpStatus::OutOfRange;
    }
    let out = std::slice::from_raw_parts_mut(xy, needed);
    for (slot, v) in out.chunks_exact_mut(2).zip(poly.vertices()) {
        slot[0] = v.x;
        slot[1] = v.y;
    }
    if !written.is_null() {
        *written = needed;
    }
    FpStatus::Ok
}

/// Serialize the full result (pieces, cut tree, verification report) to a
/// NUL-terminated JSON string.
///
/// # Safety
/// `result` must be a live result handle and `out` a writable pointer slot.
/// On success `*out` must be released with [`fp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn fp_result_to_json(
    result: *const FpResult,
    out: *mut *mut c_char,
) -> FpStatus {
    if result.is_null() || out.is_null() {
        return FpStatus::NullArgument;
    }
    let result = &(*result).inner;
    guarded(|| {
        let text = fairpart::io::to_json(result);
        match CString::new(text) {
            Ok(s) => {
                *out = s.into_raw();
                FpStatus::Ok
            }
            Err(_) => FpStatus::Panic,
        }
    })
}

/// # Safety
/// `text` must be null or a pointer obtained from [`fp_result_to_json`]
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn fp_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// # Safety
/// `result` must be null or a pointer obtained from [`fp_fair_partition`]
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn fp_result_free(result: *mut FpResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Static name for a status code, for diagnostics.
#[no_mangle]
pub extern "C" fn fp_status_name(status: FpStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        FpStatus::Ok => b"ok\0",
        FpStatus::NullArgument => b"null argument\0",
        FpStatus::InvalidPolygon => b"invalid polygon\0",
        FpStatus::UnsupportedCount => b"unsupported piece count\0",
        FpStatus::SolverFailed => b"solver failed\0",
        FpStatus::OutOfRange => b"out of range\0",
        FpStatus::Panic => b"panic\0",
    };
    name.as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;
    use std::ptr;

    const SQUARE: [f64; 8] = [0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0];

    unsafe fn square() -> *mut FpPolygon {
        let mut poly = ptr::null_mut();
        assert_eq!(fp_polygon_new(SQUARE.as_ptr(), 4, &mut poly), FpStatus::Ok);
        poly
    }

    #[test]
    fn partition_round_trip_through_the_abi() {
        unsafe {
            let poly = square();
            assert_eq!(fp_polygon_vertex_count(poly), 4);

            let mut result = ptr::null_mut();
            assert_eq!(fp_fair_partition(poly, 4, 0, &mut result), FpStatus::Ok);
            assert_eq!(fp_result_piece_count(result), 4);

            let (mut da, mut dp) = (f64::NAN, f64::NAN);
            assert_eq!(fp_result_spreads(result, &mut da, &mut dp), FpStatus::Ok);
            assert!(da <= 1e-8 && dp <= 1e-6, "spreads {da:.3e} {dp:.3e}");

            let n = fp_result_piece_vertex_count(result, 0);
            assert!(n >= 3);
            let mut buf = vec![0.0; 2 * n];
            let mut written = 0;
            assert_eq!(
                fp_result_piece_vertices(result, 0, buf.as_mut_ptr(), buf.len(), &mut written),
                FpStatus::Ok
            );
            assert_eq!(written, 2 * n);
            assert!(buf.iter().all(|v| (-0.1..=1.1).contains(v)));

            let mut text = ptr::null_mut();
            assert_eq!(fp_result_to_json(result, &mut text), FpStatus::Ok);
            let json: serde_json::Value =
                serde_json::from_str(CStr::from_ptr(text).to_str().unwrap()).unwrap();
            assert_eq!(json["pieces"].as_array().unwrap().len(), 4);
            fp_string_free(text);

            fp_result_free(result);
            fp_polygon_free(poly);
        }
    }

    #[test]
    fn error_codes_cover_the_contract() {
        unsafe {
            let mut poly = ptr::null_mut();
            assert_eq!(fp_polygon_new(ptr::null(), 4, &mut poly), FpStatus::NullArgument);

            let reflex = [0.0, 0.0, 4.0, 0.0, 4.0, 4.0, 2.0, 1.0, 0.0, 4.0];
            assert_eq!(fp_polygon_new(reflex.as_ptr(), 5, &mut poly), FpStatus::InvalidPolygon);

            let poly = square();
            let mut result = ptr::null_mut();
            assert_eq!(fp_fair_partition(poly, 3, 0, &mut result), FpStatus::UnsupportedCount);
            assert_eq!(fp_fair_partition(ptr::null(), 2, 0, &mut result), FpStatus::NullArgument);

            assert_eq!(fp_fair_partition(poly, 2, 0, &mut result), FpStatus::Ok);
            let mut buf = [0.0; 2];
            assert_eq!(
                fp_result_piece_vertices(result, 99, buf.as_mut_ptr(), 2, ptr::null_mut()),
                FpStatus::OutOfRange
            );
            assert_eq!(
                fp_result_piece_vertices(result, 0, buf.as_mut_ptr(), 2, ptr::null_mut()),
                FpStatus::OutOfRange
            );
            fp_result_free(result);
            fp_polygon_free(poly);

            let name = CStr::from_ptr(fp_status_name(FpStatus::UnsupportedCount));
            assert_eq!(name.to_str().unwrap(), "unsupported piece count");
        }
    }

    #[test]
    fn freeing_null_is_a_no_op() {
        unsafe {
            fp_polygon_free(ptr::null_mut());
            fp_result_free(ptr::null_mut());
            fp_string_free(ptr::null_mut());
        }
    }
}
