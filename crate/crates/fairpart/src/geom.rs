//! Planar primitives: strictly convex polygons with an arc-length boundary
//! parameterization, chord cuts, and partition verification.
//!
//! Boundary points are addressed by arc length `s` measured counterclockwise
//! from vertex 0; parameters are reduced modulo the perimeter `L`. A point at
//! a vertex belongs to the edge *beginning* there. All tolerances are
//! relative to the polygon diameter (`scale`), or to its square for signed
//! areas.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Relative tolerance for geometric degeneracy tests (lengths are compared
/// against `EPS_GEOM * diameter`, signed areas against `EPS_GEOM * diameter²`).
pub const EPS_GEOM: f64 = 1e-12;

/// Default relative tolerance for partition verification.
pub const EPS_VERIFY: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, t: f64) -> Point {
        Point::new(self.x * t, self.y * t)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

// Points serialize as `[x, y]` pairs to match the polygon JSON format.
impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&self.x)?;
        seq.serialize_element(&self.y)?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[f64; 2]>::deserialize(deserializer)?;
        Ok(Point::new(x, y))
    }
}

/// 2D cross product of two vectors.
pub fn cross(a: Point, b: Point) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Cross product of (a - o) and (b - o): positive when o→a→b turns left.
pub fn turn(o: Point, a: Point, b: Point) -> f64 {
    cross(a - o, b - o)
}

/// Twice the signed area of the closed loop (positive for counterclockwise).
fn shoelace2(pts: &[Point]) -> f64 {
    let n = pts.len();
    let mut acc = 0.0;
    for k in 0..n {
        acc += cross(pts[k], pts[(k + 1) % n]);
    }
    acc
}

/// Signed area of a vertex loop; positive for counterclockwise order.
pub fn polygon_area(pts: &[Point]) -> f64 {
    0.5 * shoelace2(pts)
}

/// Total edge length of a closed vertex loop.
pub fn polygon_perimeter(pts: &[Point]) -> f64 {
    let n = pts.len();
    (0..n).map(|k| pts[k].dist(pts[(k + 1) % n])).sum()
}

/// Largest pairwise vertex distance.
pub fn diameter(pts: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.max(pts[i].dist(pts[j]));
        }
    }
    best
}

/// Index of the first corner that turns right by more than `tol`
/// (relative, scaled by the squared diameter), or `None` if every corner
/// turns left or is straight within tolerance.
pub fn reflex_vertex(pts: &[Point], tol: f64) -> Option<usize> {
    let n = pts.len();
    let eps2 = tol * diameter(pts).powi(2);
    (0..n).find(|&k| turn(pts[(k + n - 1) % n], pts[k], pts[(k + 1) % n]) < -eps2)
}

/// Whether the loop makes exactly one full counterclockwise turn.
fn winds_once(pts: &[Point]) -> bool {
    let n = pts.len();
    let mut total = 0.0;
    for k in 0..n {
        let e0 = pts[(k + 1) % n] - pts[k];
        let e1 = pts[(k + 2) % n] - pts[(k + 1) % n];
        total += cross(e0, e1).atan2(e0.dot(e1));
    }
    (total - std::f64::consts::TAU).abs() < std::f64::consts::PI
}

/// Whether the loop is convex and counterclockwise: no reflex corner beyond
/// `tol` and exactly one full turn.
pub fn is_convex(pts: &[Point], tol: f64) -> bool {
    pts.len() >= 3 && reflex_vertex(pts, tol).is_none() && winds_once(pts)
}

/// A strictly convex polygon, counterclockwise, with cached area, perimeter
/// and cumulative edge lengths.
///
/// Construction cleans its input: consecutive duplicates are dropped,
/// clockwise input is reversed, and collinear runs are merged. Anything
/// still short of strict convexity is rejected.
#[derive(Clone, Debug)]
pub struct Polygon {
    verts: Vec<Point>,
    /// cum[k] = arc length from vertex 0 to vertex k; cum[n] = perimeter.
    cum: Vec<f64>,
    area: f64,
    scale: f64,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::DegeneratePolygon(format!(
                "{} vertices, need at least 3",
                vertices.len()
            )));
        }
        for p in &vertices {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::DegeneratePolygon(format!(
                    "non-finite vertex {p}"
                )));
            }
        }
        let scale = diameter(&vertices);
        if scale <= 0.0 {
            return Err(Error::DegeneratePolygon(
                "all vertices coincide".to_string(),
            ));
        }
        let eps = EPS_GEOM * scale;
        let eps2 = EPS_GEOM * scale * scale;

        // Drop consecutive duplicates, including the closing one.
        let mut pts: Vec<Point> = Vec::with_capacity(vertices.len());
        for p in vertices {
            if pts.last().is_none_or(|q| q.dist(p) > eps) {
                pts.push(p);
            }
        }
        while pts.len() >= 2 && pts[0].dist(*pts.last().unwrap()) <= eps {
            pts.pop();
        }

        if pts.len() >= 3 && shoelace2(&pts) < 0.0 {
            pts.reverse();
        }

        // Merge collinear runs (straight-ahead corners only; spikes and
        // reflex corners are left for the convexity check to report).
        loop {
            let n = pts.len();
            if n < 3 {
                break;
            }
            let collinear = (0..n).find(|&k| {
                let a = pts[(k + n - 1) % n];
                let b = pts[k];
                let c = pts[(k + 1) % n];
                turn(a, b, c).abs() <= eps2 && (b - a).dot(c - b) > 0.0
            });
            match collinear {
                Some(k) => {
                    pts.remove(k);
                }
                None => break,
            }
        }

        if pts.len() < 3 {
            return Err(Error::DegeneratePolygon(
                "collapses to fewer than 3 vertices".to_string(),
            ));
        }
        let n = pts.len();
        if let Some(k) = (0..n).find(|&k| {
            turn(pts[(k + n - 1) % n], pts[k], pts[(k + 1) % n]) <= eps2
        }) {
            return Err(Error::NotConvex { index: k });
        }
        if !winds_once(&pts) {
            return Err(Error::SelfWinding);
        }

        let mut cum = Vec::with_capacity(n + 1);
        cum.push(0.0);
        for k in 0..n {
            let step = pts[k].dist(pts[(k + 1) % n]);
            cum.push(cum[k] + step);
        }
        let area = 0.5 * shoelace2(&pts);
        let scale = diameter(&pts);
        Ok(Polygon {
            verts: pts,
            cum,
            area,
            scale,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.verts
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    /// Diameter: the scale every relative tolerance refers to.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Arc length from vertex 0 to vertex `k` (the parameter of vertex `k`).
    pub fn vertex_param(&self, k: usize) -> f64 {
        self.cum[k]
    }

    pub fn cumulative_lengths(&self) -> &[f64] {
        &self.cum
    }

    pub fn edge_len(&self, k: usize) -> f64 {
        self.cum[k + 1] - self.cum[k]
    }

    /// Unit direction of edge `k` (from vertex k to vertex k+1).
    pub fn edge_dir(&self, k: usize) -> Point {
        let d = self.verts[(k + 1) % self.verts.len()] - self.verts[k];
        d * (1.0 / self.edge_len(k))
    }

    /// Reduce a boundary parameter into [0, L).
    pub fn reduce(&self, s: f64) -> f64 {
        let l = self.perimeter();
        let r = s.rem_euclid(l);
        if r >= l {
            0.0
        } else {
            r
        }
    }

    /// Snap a reduced parameter to the nearest vertex parameter when within
    /// the geometric tolerance; vertex n snaps to 0.
    pub fn snap_param(&self, s: f64) -> f64 {
        let eps = EPS_GEOM * self.scale;
        let k = self.edge_of(s);
        if (s - self.cum[k]).abs() <= eps {
            return self.cum[k];
        }
        if (self.cum[k + 1] - s).abs() <= eps {
            return if k + 1 == self.verts.len() {
                0.0
            } else {
                self.cum[k + 1]
            };
        }
        s
    }

    /// Edge index for a reduced parameter: cum[k] <= s < cum[k+1].
    fn edge_of(&self, s: f64) -> usize {
        debug_assert!((0.0..self.perimeter() + 1.0).contains(&s));
        let k = self.cum.partition_point(|&c| c <= s);
        k.saturating_sub(1).min(self.verts.len() - 1)
    }

    /// Edge that the boundary point at `s` lies on; at a vertex, the edge
    /// beginning there.
    pub fn boundary_edge(&self, s: f64) -> usize {
        self.edge_of(self.reduce(s))
    }

    pub fn boundary_point(&self, s: f64) -> Point {
        let s = self.reduce(s);
        let k = self.edge_of(s);
        self.verts[k] + self.edge_dir(k) * (s - self.cum[k])
    }

    /// The parameter diametrically opposite along the boundary: s + L/2 mod L.
    pub fn antipodal(&self, s: f64) -> f64 {
        self.reduce(s + 0.5 * self.perimeter())
    }

    pub fn centroid(&self) -> Point {
        // Area-weighted centroid via the standard shoelace moments.
        let n = self.verts.len();
        let mut cx = 0.0;
        let mut cy = 0.0;
        for k in 0..n {
            let a = self.verts[k];
            let b = self.verts[(k + 1) % n];
            let w = cross(a, b);
            cx += (a.x + b.x) * w;
            cy += (a.y + b.y) * w;
        }
        let f = 1.0 / (6.0 * self.area);
        Point::new(cx * f, cy * f)
    }

    /// Whether `p` lies inside (or within `tol_len` outside of) the polygon.
    pub fn contains(&self, p: Point, tol_len: f64) -> bool {
        let n = self.verts.len();
        (0..n).all(|k| {
            let a = self.verts[k];
            let b = self.verts[(k + 1) % n];
            turn(a, b, p) >= -tol_len * self.edge_len(k)
        })
    }

    /// Uniformly scaled and translated copy: `p ↦ p * factor + offset`.
    pub fn transformed(&self, factor: f64, offset: Point) -> Result<Polygon> {
        Polygon::new(
            self.verts
                .iter()
                .map(|&p| p * factor + offset)
                .collect::<Vec<_>>(),
        )
    }

    /// Build a chord between two boundary parameters (reduced and snapped).
    pub fn chord_at(&self, s_start: f64, s_end: f64) -> Result<Chord> {
        let s0 = self.snap_param(self.reduce(s_start));
        let s1 = self.snap_param(self.reduce(s_end));
        let eps = EPS_GEOM * self.scale;
        let l = self.perimeter();
        let gap = (s1 - s0).rem_euclid(l);
        if gap <= eps || gap >= l - eps {
            return Err(Error::DegenerateChord {
                s_start: s0,
                s_end: s1,
            });
        }
        let start = self.boundary_point(s0);
        let end = self.boundary_point(s1);
        // Also reject chords that run along the boundary itself (both
        // endpoints on one edge): the shorter arc equals the straight line.
        let shorter = gap.min(l - gap);
        if start.dist(end) <= eps || shorter - start.dist(end) <= eps {
            return Err(Error::DegenerateChord {
                s_start: s0,
                s_end: s1,
            });
        }
        Ok(Chord {
            s_start: s0,
            s_end: s1,
            start,
            end,
        })
    }

    /// Boundary points from `s_from` to `s_to` counterclockwise: both
    /// endpoints plus every vertex strictly between them.
    fn arc_points(&self, s_from: f64, s_to: f64) -> Vec<Point> {
        let l = self.perimeter();
        let eps = EPS_GEOM * self.scale;
        let n = self.verts.len();
        let span = (s_to - s_from).rem_euclid(l);
        let mut out = Vec::with_capacity(n + 2);
        out.push(self.boundary_point(s_from));
        let k = self.edge_of(s_from);
        for step in 1..=n {
            let j = (k + step) % n;
            let t = (self.cum[j] - s_from).rem_euclid(l);
            if t >= span - eps {
                break;
            }
            if t > eps {
                out.push(self.verts[j]);
            }
        }
        out.push(self.boundary_point(s_to));
        out
    }

    /// Split the polygon along a chord. The first piece contains the
    /// counterclockwise boundary arc from `s_start` to `s_end` (the "left"
    /// piece by convention), the second the complementary arc. Piece areas
    /// sum to the parent area and each piece perimeter is its boundary-arc
    /// length plus the chord length.
    pub fn cut(&self, chord: &Chord) -> Result<(Polygon, Polygon)> {
        let left = Polygon::new(self.arc_points(chord.s_start, chord.s_end))?;
        let right = Polygon::new(self.arc_points(chord.s_end, chord.s_start))?;
        debug_assert!(
            ((left.area() + right.area()) - self.area()).abs()
                <= EPS_VERIFY * self.area(),
            "cut does not conserve area"
        );
        Ok((left, right))
    }
}

impl PartialEq for Polygon {
    fn eq(&self, other: &Self) -> bool {
        self.verts == other.verts
    }
}

impl Serialize for Polygon {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.verts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polygon {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Polygon;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a list of [x, y] vertices")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Polygon, A::Error> {
                let mut pts = Vec::new();
                while let Some(p) = seq.next_element::<Point>()? {
                    pts.push(p);
                }
                Polygon::new(pts).map_err(serde::de::Error::custom)
            }
        }
        deserializer.deserialize_seq(V)
    }
}

/// A directed chord between two boundary parameters, with cached endpoints.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Chord {
    pub s_start: f64,
    pub s_end: f64,
    #[serde(skip)]
    #[serde(default = "origin")]
    pub start: Point,
    #[serde(skip)]
    #[serde(default = "origin")]
    pub end: Point,
}

fn origin() -> Point {
    Point::new(0.0, 0.0)
}

impl Chord {
    pub fn len(&self) -> f64 {
        self.start.dist(self.end)
    }
}

/// Verification summary for a set of pieces against a parent polygon.
/// Spreads are (max - min) / mean.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionReport {
    pub piece_count: usize,
    pub areas: Vec<f64>,
    pub perimeters: Vec<f64>,
    pub area_spread: f64,
    pub perimeter_spread: f64,
    pub all_convex: bool,
    pub tiles_parent: bool,
}

fn spread(values: &[f64]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
        sum += v;
    }
    let mean = sum / values.len() as f64;
    if mean == 0.0 {
        0.0
    } else {
        (hi - lo) / mean
    }
}

/// Check that `pieces` form a fair-candidate partition of `parent`: collect
/// areas and perimeters with their spreads, re-check convexity, and test the
/// tiling conditions (areas sum to the parent area, pairwise overlaps are
/// negligible, and every piece stays inside the parent), all at the relative
/// tolerance `tol`.
pub fn validate_partition(parent: &Polygon, pieces: &[Polygon], tol: f64) -> PartitionReport {
    let areas: Vec<f64> = pieces.iter().map(|p| p.area()).collect();
    let perimeters: Vec<f64> = pieces.iter().map(|p| p.perimeter()).collect();
    let all_convex = pieces.iter().all(|p| is_convex(p.vertices(), tol));

    let area_tol = tol * parent.area();
    let sum: f64 = areas.iter().sum();
    let mut tiles = (sum - parent.area()).abs() <= area_tol;
    if tiles {
        'outer: for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                if convex_overlap_area(&pieces[i], &pieces[j]) > area_tol {
                    tiles = false;
                    break 'outer;
                }
            }
        }
    }
    if tiles {
        let margin = tol * parent.scale();
        tiles = pieces
            .iter()
            .all(|p| p.vertices().iter().all(|&v| parent.contains(v, margin)));
    }

    PartitionReport {
        piece_count: pieces.len(),
        area_spread: spread(&areas),
        perimeter_spread: spread(&perimeters),
        areas,
        perimeters,
        all_convex,
        tiles_parent: tiles,
    }
}

/// Keep the part of a loop on the left of the directed line p→q
/// (Sutherland–Hodgman step).
pub(crate) fn clip_halfplane(pts: &[Point], p: Point, q: Point) -> Vec<Point> {
    let mut out = Vec::with_capacity(pts.len() + 1);
    let n = pts.len();
    for k in 0..n {
        let a = pts[k];
        let b = pts[(k + 1) % n];
        let da = turn(p, q, a);
        let db = turn(p, q, b);
        if da >= 0.0 {
            out.push(a);
        }
        if (da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0) {
            let t = da / (da - db);
            out.push(a + (b - a) * t);
        }
    }
    out
}

/// Area of the intersection of two convex polygons.
pub fn convex_overlap_area(a: &Polygon, b: &Polygon) -> f64 {
    let mut pts: Vec<Point> = a.vertices().to_vec();
    let bv = b.vertices();
    let n = bv.len();
    for k in 0..n {
        pts = clip_halfplane(&pts, bv[k], bv[(k + 1) % n]);
        if pts.len() < 3 {
            return 0.0;
        }
    }
    polygon_area(&pts).abs()
}
