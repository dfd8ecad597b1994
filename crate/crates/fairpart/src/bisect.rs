//! Antipodal fair bisectors and directed area bisectors.
//!
//! A chord that joins a boundary point P(s) to its antipode P(s + L/2)
//! always splits the perimeter evenly, so it splits the polygon into two
//! pieces of equal perimeter (each gets half the boundary plus the chord).
//! The area difference between the two pieces,
//!
//! ```text
//!     alpha(s) = area(left piece) - area(right piece),
//! ```
//!
//! is what decides fairness: a zero of `alpha` is a chord that also halves
//! the area. While both endpoints travel inside fixed edges, each endpoint
//! is an affine function of `s` and the shoelace sum of the left piece is a
//! quadratic in `s` — so `alpha` is a continuous piecewise-quadratic with
//! breakpoints where either endpoint passes a vertex. [`AlphaProfile`]
//! builds that closed form once; zero-finding then reduces to per-segment
//! quadratic roots instead of nested area searches.
//!
//! Antipodality makes `alpha(s + L/2) = -alpha(s)`, so everything is
//! computed on a half-period and mirrored. Zeros can be isolated points or
//! whole intervals (intervals need antipodal parallel edges); both are
//! reported as [`FairRange`]s, tagged with whether `alpha` actually changes
//! sign there ("proper") — a tangent touch does not survive perturbation
//! and downstream solvers usually want crossings only.
//!
//! [`area_bisector_at`] solves the complementary problem: for a fixed
//! direction, the unique chord perpendicular to that direction's normal
//! sweep that halves the area (equal perimeter not required).

use serde::Serialize;

use crate::geom::{cross, Chord, Point, Polygon, EPS_GEOM};
use crate::{Error, Result};

/// Zero-classification tolerance for `alpha`, relative to scale².
pub const EPS_ALPHA: f64 = 1e-10;

/// Relative area tolerance for the directed area-bisector search.
const EPS_AREA_BISECT: f64 = 1e-12;
const AREA_BISECT_MAX_ITER: u32 = 80;

/// Area difference `left - right` of the two pieces cut by the antipodal
/// chord at boundary parameter `s`, measured directly by cutting the
/// polygon. Slow but has no shared machinery with [`AlphaProfile`]; used
/// as the ground truth in tests.
pub fn alpha(poly: &Polygon, s: f64) -> f64 {
    let t = poly.antipodal(s);
    let chord = poly
        .chord_at(s, t)
        .expect("antipodal chords of a convex polygon are nondegenerate");
    let (left, right) = poly
        .cut(&chord)
        .expect("antipodal cut yields two genuine pieces");
    left.area() - right.area()
}

/// One quadratic piece of the area-difference profile: on
/// `s in [s_lo, s_hi]` both chord endpoints stay on the edge pair `edges`
/// and `alpha(s) = a s² + b s + c`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AlphaSegment {
    pub s_lo: f64,
    pub s_hi: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Edge indices carrying P(s) and P(s + L/2) on this window.
    pub edges: (usize, usize),
}

impl AlphaSegment {
    pub fn eval(&self, s: f64) -> f64 {
        (self.a * s + self.b) * s + self.c
    }
}

/// Closed form of `alpha` over the half-period `[0, L/2]`, extended to all
/// `s` by periodicity and the antipodal antisymmetry.
#[derive(Debug, Clone, Serialize)]
pub struct AlphaProfile {
    segments: Vec<AlphaSegment>,
    half: f64,
    scale: f64,
}

impl AlphaProfile {
    pub fn build(poly: &Polygon) -> AlphaProfile {
        let n = poly.vertex_count();
        let verts = poly.vertices();
        let cum = poly.cumulative_lengths();
        let half = 0.5 * poly.perimeter();
        let eps = EPS_GEOM * poly.scale();

        // Breakpoints: every parameter where P(s) or P(s + L/2) sits on a
        // vertex, folded into the half-period.
        let mut bp: Vec<f64> = (0..n).map(|k| cum[k].rem_euclid(half)).collect();
        bp.push(half);
        bp.sort_by(f64::total_cmp);
        bp.dedup_by(|a, b| (*a - *b).abs() <= eps);
        if bp[0] > eps {
            bp.insert(0, 0.0);
        } else {
            bp[0] = 0.0;
        }
        *bp.last_mut().unwrap() = half;

        let area = poly.area();
        let mut segments = Vec::with_capacity(bp.len() - 1);
        for w in bp.windows(2) {
            let (u, v) = (w[0], w[1]);
            if v - u <= eps {
                continue;
            }
            let mid = 0.5 * (u + v);
            let i = poly.boundary_edge(mid);
            let j = poly.boundary_edge(poly.reduce(mid + half));
            debug_assert_ne!(i, j, "no edge spans half the perimeter");

            // P(s) = p0 + di·s on edge i, P(s + L/2) = q0 + dj·s on edge j.
            let di = poly.edge_dir(i);
            let dj = poly.edge_dir(j);
            let p0 = verts[i] - di * cum[i];
            let q0 = verts[j] + dj * (half - cum[j]);
            let vi1 = verts[(i + 1) % n];
            let vj = verts[j];

            // Shoelace sum of the loop [P, V_{i+1}, ..., V_j, P'] expanded
            // in powers of s; subtracting the total area turns twice the
            // left area into left minus right.
            let mut c_mid = 0.0;
            let mut t = (i + 1) % n;
            while t != j {
                c_mid += cross(verts[t], verts[(t + 1) % n]);
                t = (t + 1) % n;
            }
            let a = cross(dj, di);
            let b = cross(di, vi1) + cross(vj, dj) + cross(q0, di) + cross(dj, p0);
            let c = cross(p0, vi1) + c_mid + cross(vj, q0) + cross(q0, p0) - area;
            segments.push(AlphaSegment {
                s_lo: u,
                s_hi: v,
                a,
                b,
                c,
                edges: (i, j),
            });
        }
        AlphaProfile {
            segments,
            half,
            scale: poly.scale(),
        }
    }

    /// `alpha(s)` for any real `s` (periodic, antisymmetric across L/2).
    pub fn eval(&self, s: f64) -> f64 {
        let t = s.rem_euclid(2.0 * self.half);
        if t >= self.half {
            -self.window_eval(t - self.half)
        } else {
            self.window_eval(t)
        }
    }

    fn window_eval(&self, t: f64) -> f64 {
        let idx = self
            .segments
            .partition_point(|seg| seg.s_lo <= t)
            .saturating_sub(1);
        self.segments[idx].eval(t)
    }

    pub fn segments(&self) -> &[AlphaSegment] {
        &self.segments
    }

    /// Half the perimeter: the period of the piecewise-quadratic window.
    pub fn half_period(&self) -> f64 {
        self.half
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// Real roots of `a s² + b s + c`, ascending. The larger-magnitude root is
/// computed from `-(b + sign(b)·√disc)/2` and the other as `c/q`, which
/// avoids the cancellation the textbook formula suffers when `|4ac| ≪ b²`.
pub(crate) fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    let q = if b >= 0.0 {
        -0.5 * (b + sq)
    } else {
        -0.5 * (b - sq)
    };
    if q == 0.0 {
        // b = 0 and disc = 0: double root at the origin.
        return vec![0.0, 0.0];
    }
    let r1 = q / a;
    let r2 = c / q;
    if r1 <= r2 {
        vec![r1, r2]
    } else {
        vec![r2, r1]
    }
}

/// A connected component of the zero set of `alpha`, reduced to one
/// representative per antipodal pair. `s_hi >= s_lo`; for point zeros they
/// coincide up to merge tolerance. `proper` means `alpha` changes sign
/// across the component; `whole_boundary` flags the degenerate case where
/// every antipodal chord is fair (centrally symmetric polygons).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FairRange {
    pub s_lo: f64,
    pub s_hi: f64,
    pub proper: bool,
    pub whole_boundary: bool,
}

impl FairRange {
    /// Canonical parameter inside the range (its midpoint).
    pub fn rep(&self) -> f64 {
        if self.whole_boundary {
            0.0
        } else {
            0.5 * (self.s_lo + self.s_hi)
        }
    }

    pub fn len(&self) -> f64 {
        self.s_hi - self.s_lo
    }

    pub fn is_point(&self, eps: f64) -> bool {
        self.len() <= eps
    }
}

/// Zero set of `alpha`, one [`FairRange`] per antipodal pair of components,
/// sorted by `s_lo`.
pub fn fair_ranges(poly: &Polygon) -> Vec<FairRange> {
    fair_ranges_from_profile(&AlphaProfile::build(poly))
}

pub fn fair_ranges_from_profile(prof: &AlphaProfile) -> Vec<FairRange> {
    let half = prof.half;
    let l = 2.0 * half;
    let eps_val = EPS_ALPHA * prof.scale * prof.scale;
    let eps_merge = 1e-9 * prof.scale;

    // Collect zero items on [0, half]: whole flat segments, else roots.
    let mut items: Vec<(f64, f64)> = Vec::new();
    let mut all_zero = true;
    for seg in &prof.segments {
        let q = half;
        let bound = seg.a.abs() * q * q + seg.b.abs() * q + seg.c.abs();
        if bound <= eps_val {
            items.push((seg.s_lo, seg.s_hi));
            continue;
        }
        all_zero = false;
        for r in quadratic_roots(seg.a, seg.b, seg.c) {
            if r >= seg.s_lo - eps_merge && r <= seg.s_hi + eps_merge {
                let rc = r.clamp(seg.s_lo, seg.s_hi);
                items.push((rc, rc));
            }
        }
    }
    if all_zero {
        return vec![FairRange {
            s_lo: 0.0,
            s_hi: l,
            proper: true,
            whole_boundary: true,
        }];
    }
    if items.is_empty() {
        return Vec::new();
    }

    // Mirror to the full period and merge overlapping items.
    let mirrored: Vec<(f64, f64)> = items.iter().map(|&(a, b)| (a + half, b + half)).collect();
    items.extend(mirrored);
    items.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut comps: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in items {
        match comps.last_mut() {
            Some(last) if lo <= last.1 + eps_merge => last.1 = last.1.max(hi),
            _ => comps.push((lo, hi)),
        }
    }
    // Wrap-around: the component through s = 0 appears split in two.
    if comps.len() >= 2 {
        let first = comps[0];
        let last = *comps.last().unwrap();
        if first.0 + l <= last.1 + eps_merge {
            comps.pop();
            comps[0] = (last.0 - l, first.1.max(last.1 - l));
        }
    }
    if comps.len() == 1 && comps[0].1 - comps[0].0 >= l - eps_merge {
        return vec![FairRange {
            s_lo: 0.0,
            s_hi: l,
            proper: true,
            whole_boundary: true,
        }];
    }

    // Properness from the sign of alpha in the gaps between components.
    let m = comps.len();
    let mut gap_sign = vec![1i8; m];
    for k in 0..m {
        let hi = comps[k].1;
        let next_lo = comps[(k + 1) % m].0;
        let gap = (next_lo - hi).rem_euclid(l);
        let mid = hi + 0.5 * gap;
        gap_sign[k] = if prof.eval(mid) >= 0.0 { 1 } else { -1 };
    }

    // One representative per antipodal pair: keep the component whose
    // midpoint (snapped) lands in [0, half). Kept ranges are recentered on
    // that canonical midpoint so a component straddling s = 0 does not
    // reappear at the far end of the period.
    let mut out = Vec::new();
    for k in 0..m {
        let (lo, hi) = comps[k];
        let midr = (0.5 * (lo + hi)).rem_euclid(l);
        let keep = if midr <= eps_merge || midr >= l - eps_merge {
            true
        } else if (midr - half).abs() <= eps_merge {
            false
        } else {
            midr < half
        };
        if !keep {
            continue;
        }
        let proper = gap_sign[(k + m - 1) % m] != gap_sign[k];
        let mut mid = if midr >= l - eps_merge { midr - l } else { midr };
        if mid == 0.0 {
            mid = 0.0; // normalize -0.0
        }
        let w = hi - lo;
        out.push(FairRange {
            s_lo: mid - 0.5 * w,
            s_hi: mid + 0.5 * w,
            proper,
            whole_boundary: false,
        });
    }
    if 2 * out.len() != m {
        log::warn!(
            "fair range pairing kept {} of {} components; zero set is numerically asymmetric",
            out.len(),
            m
        );
    }
    out.sort_by(|x, y| x.s_lo.total_cmp(&y.s_lo));
    out
}

/// Every fair bisector of the polygon: the representative chord of each
/// zero range together with the half-perimeter `p` of the two pieces it
/// cuts (`p = L/2 + chord length`, identical for both pieces).
pub fn fair_bisectors(poly: &Polygon) -> Vec<(FairRange, Chord, f64)> {
    let half = 0.5 * poly.perimeter();
    fair_ranges(poly)
        .into_iter()
        .filter_map(|r| {
            let s = poly.reduce(r.rep());
            let chord = poly.chord_at(s, poly.antipodal(s)).ok()?;
            let p = half + chord.len();
            Some((r, chord, p))
        })
        .collect()
}

/// The unique area-bisecting chord perpendicular to the unit normal
/// `n = (-sin θ, cos θ)`: the cut line is `n·x = o` with `o` chosen so the
/// `n`-positive side holds half the area. The returned chord runs from the
/// boundary crossing that enters the positive side to the one that leaves
/// it, so the left piece of [`Polygon::cut`] is the `n`-side piece and
/// `θ + π` swaps the two pieces.
pub fn area_bisector_at(poly: &Polygon, theta: f64) -> Result<Chord> {
    let n_hat = Point::new(-theta.sin(), theta.cos());
    let verts = poly.vertices();
    let n = verts.len();
    let h: Vec<f64> = verts.iter().map(|v| n_hat.dot(*v)).collect();
    let mut lo = h.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let target = 0.5 * poly.area();
    let tol = EPS_AREA_BISECT * poly.area();

    // Support direction d along the cut line; left of p→(p+d) is the
    // n-positive side.
    let d = Point::new(n_hat.y, -n_hat.x);
    let area_above = |o: f64| -> f64 {
        let p = n_hat * o;
        let clipped = crate::geom::clip_halfplane(verts, p, p + d);
        if clipped.len() < 3 {
            0.0
        } else {
            crate::geom::polygon_area(&clipped).abs()
        }
    };

    // area_above decreases from area to 0 as o sweeps across the polygon.
    for _ in 0..AREA_BISECT_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let f = area_above(mid) - target;
        if f.abs() <= tol {
            lo = mid;
            hi = mid;
            break;
        }
        if f > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let o = 0.5 * (lo + hi);

    // Classify boundary crossings of the line n·x = o. Vertices sitting on
    // the line count as crossings only when the adjacent signs differ.
    let eps_g = EPS_GEOM * poly.scale();
    let g: Vec<f64> = h.iter().map(|v| v - o).collect();
    let state = |k: usize| -> i8 {
        if g[k].abs() <= eps_g {
            0
        } else if g[k] > 0.0 {
            1
        } else {
            -1
        }
    };
    let mut events: Vec<(f64, bool)> = Vec::new();
    for k in 0..n {
        match state(k) {
            0 => {
                // Only handle the first vertex of a zero run.
                if state((k + n - 1) % n) == 0 {
                    continue;
                }
                let mut fwd = (k + 1) % n;
                let mut steps = 0;
                while state(fwd) == 0 && steps < n {
                    fwd = (fwd + 1) % n;
                    steps += 1;
                }
                if steps > 0 {
                    return Err(Error::VerificationFailed(format!(
                        "area bisector at theta={theta}: an edge lies on the cut line"
                    )));
                }
                let before = state((k + n - 1) % n);
                let after = state(fwd);
                if before != after {
                    events.push((poly.vertex_param(k), after > 0));
                }
            }
            sk => {
                let k1 = (k + 1) % n;
                let sk1 = state(k1);
                if sk1 != 0 && sk1 != sk {
                    let t = g[k] / (g[k] - g[k1]);
                    let s = poly.vertex_param(k) + t * poly.edge_len(k);
                    events.push((s, sk1 > 0));
                }
            }
        }
    }
    if events.len() != 2 || events[0].1 == events[1].1 {
        return Err(Error::VerificationFailed(format!(
            "area bisector at theta={theta}: {} boundary crossings, expected one entering and one leaving",
            events.len()
        )));
    }
    let (s_enter, s_exit) = if events[0].1 {
        (events[0].0, events[1].0)
    } else {
        (events[1].0, events[0].0)
    };
    poly.chord_at(s_enter, s_exit)
}
