//! Seeded random convex polygons.
//!
//! Classic directions construction: draw n random edge vectors, recenter
//! them so they sum to zero, sort by angle, and chain them. Sorted edge
//! directions make the chain convex; the loop closes because the vectors
//! sum to zero. The result is scaled to unit diameter and centered on its
//! centroid. Fully deterministic for a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{Point, Polygon};

/// Reject candidates thinner than this (area relative to the squared
/// diameter), so suites exercise honest shapes rather than slivers that only
/// probe floating-point noise.
const MIN_AREA_RATIO: f64 = 0.02;

/// A strictly convex polygon with exactly `n_vertices` vertices, unit
/// diameter, centroid at the origin.
pub fn random_convex_polygon(seed: u64, n_vertices: usize) -> Polygon {
    assert!(n_vertices >= 3, "need at least 3 vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        if let Some(poly) = candidate(&mut rng, n_vertices) {
            return poly;
        }
    }
}

fn candidate(rng: &mut ChaCha8Rng, n: usize) -> Option<Polygon> {
    let mut vecs: Vec<Point> = (0..n)
        .map(|_| {
            let ang = rng.random_range(0.0..std::f64::consts::TAU);
            let len = rng.random_range(0.3..1.0);
            Point::new(ang.cos() * len, ang.sin() * len)
        })
        .collect();
    let mut mean = Point::new(0.0, 0.0);
    for v in &vecs {
        mean = mean + *v;
    }
    mean = mean * (1.0 / n as f64);
    for v in &mut vecs {
        *v = *v - mean;
    }
    vecs.sort_by(|a, b| a.y.atan2(a.x).total_cmp(&b.y.atan2(b.x)));

    let mut pts = Vec::with_capacity(n);
    let mut cur = Point::new(0.0, 0.0);
    for v in vecs {
        pts.push(cur);
        cur = cur + v;
    }
    let poly = Polygon::new(pts).ok()?;
    if poly.vertex_count() != n {
        // A merged collinear pair; extremely rare, just redraw.
        return None;
    }
    let c = poly.centroid();
    let d = poly.scale();
    let norm = poly.transformed(1.0 / d, c * (-1.0 / d)).ok()?;
    if norm.vertex_count() != n || norm.area() < MIN_AREA_RATIO {
        return None;
    }
    Some(norm)
}

/// A batch of seeded polygons with vertex counts drawn from
/// `nv_lo..=nv_hi`; returns each polygon's own seed alongside it.
pub fn random_polygon_suite(
    seed: u64,
    count: usize,
    nv_lo: usize,
    nv_hi: usize,
) -> Vec<(u64, Polygon)> {
    let mut meta = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let nv = meta.random_range(nv_lo..=nv_hi);
            let s: u64 = meta.random();
            (s, random_convex_polygon(s, nv))
        })
        .collect()
}

/// A random triangle whose side lengths pairwise differ by at least 5%.
pub fn random_scalene_triangle(seed: u64) -> Polygon {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let Some(t) = candidate(&mut rng, 3) else {
            continue;
        };
        let sides = [t.edge_len(0), t.edge_len(1), t.edge_len(2)];
        let distinct = |a: f64, b: f64| (a - b).abs() > 0.05 * (a + b) * 0.5;
        if distinct(sides[0], sides[1])
            && distinct(sides[1], sides[2])
            && distinct(sides[0], sides[2])
        {
            return t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::is_convex;

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = random_convex_polygon(42, 7);
        let b = random_convex_polygon(42, 7);
        assert_eq!(a, b);
    }

    #[test]
    fn respects_requested_shape() {
        for seed in 0..30u64 {
            let n = 3 + (seed as usize % 10);
            let p = random_convex_polygon(seed, n);
            assert_eq!(p.vertex_count(), n, "seed {seed}");
            assert!(is_convex(p.vertices(), 1e-12));
            assert!((p.scale() - 1.0).abs() < 1e-9, "diameter {}", p.scale());
            assert!(p.area() >= MIN_AREA_RATIO);
            let c = p.centroid();
            assert!(c.norm() < 1e-9);
        }
    }

    #[test]
    fn scalene_triangles_have_distinct_sides() {
        for seed in 0..20u64 {
            let t = random_scalene_triangle(seed);
            let s = [t.edge_len(0), t.edge_len(1), t.edge_len(2)];
            assert!((s[0] - s[1]).abs() > 0.04 * s[0].max(s[1]));
        }
    }

    #[test]
    fn suite_is_deterministic_and_varied() {
        let a = random_polygon_suite(7, 10, 3, 12);
        let b = random_polygon_suite(7, 10, 3, 12);
        assert_eq!(a.len(), 10);
        for ((sa, pa), (sb, pb)) in a.iter().zip(&b) {
            assert_eq!(sa, sb);
            assert_eq!(pa, pb);
        }
        let counts: std::collections::HashSet<usize> =
            a.iter().map(|(_, p)| p.vertex_count()).collect();
        assert!(counts.len() > 2);
    }
}
