//! JSON input and output shared by the CLI subcommands.
//!
//! Polygons arrive as `{"vertices": [[x, y], ...]}` in counterclockwise
//! order; clockwise input is reversed on load and non-convex input is
//! rejected with a diagnostic naming the offending vertex. Writers emit
//! pretty JSON with serde's shortest-round-trip float formatting, so
//! re-parsing a dump reproduces every coordinate bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bisect::{fair_ranges_from_profile, AlphaProfile};
use crate::curves::PerimeterGraph;
use crate::error::{Error, Result};
use crate::geom::{Point, Polygon};

#[derive(Debug, Deserialize)]
struct PolygonFile {
    vertices: Vec<[f64; 2]>,
}

/// Parse a polygon from its JSON object form.
pub fn polygon_from_json(text: &str) -> Result<Polygon> {
    let raw: PolygonFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("polygon JSON: {e}")))?;
    let verts = raw.vertices.into_iter().map(|[x, y]| Point::new(x, y)).collect();
    Polygon::new(verts)
}

/// Read a polygon file. Winding correction and convexity diagnostics come
/// from [`Polygon::new`].
pub fn read_polygon(path: &Path) -> Result<Polygon> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    polygon_from_json(&text)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value))
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

/// `alpha` subcommand payload: the piecewise-quadratic imbalance profile on
/// one half-period plus its classified zero ranges.
#[derive(Debug, Serialize)]
pub struct AlphaDump {
    pub half_period: f64,
    /// True when every antipodal chord is fair (centrally symmetric input).
    pub whole_boundary: bool,
    pub profile: Vec<AlphaSegmentDump>,
    pub ranges: Vec<FairRangeDump>,
}

#[derive(Debug, Serialize)]
pub struct AlphaSegmentDump {
    pub s_lo: f64,
    pub s_hi: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Serialize)]
pub struct FairRangeDump {
    pub s_lo: f64,
    pub s_hi: f64,
    pub proper: bool,
}

pub fn alpha_dump(poly: &Polygon) -> AlphaDump {
    let prof = AlphaProfile::build(poly);
    let ranges = fair_ranges_from_profile(&prof);
    AlphaDump {
        half_period: prof.half_period(),
        whole_boundary: ranges.iter().any(|r| r.whole_boundary),
        profile: prof
            .segments()
            .iter()
            .map(|s| AlphaSegmentDump { s_lo: s.s_lo, s_hi: s.s_hi, a: s.a, b: s.b, c: s.c })
            .collect(),
        ranges: ranges
            .iter()
            .map(|r| FairRangeDump { s_lo: r.s_lo, s_hi: r.s_hi, proper: r.proper })
            .collect(),
    }
}

/// `curve` subcommand payload: γ branches as [θ, p] polylines and β segments
/// as [θ, p_lo, p_hi] verticals, intended for external plotting.
#[derive(Debug, Serialize)]
pub struct CurveDump {
    pub theta_samples: usize,
    pub branches: Vec<Vec<[f64; 2]>>,
    pub betas: Vec<[f64; 3]>,
}

pub fn curve_dump(graph: &PerimeterGraph) -> CurveDump {
    CurveDump {
        theta_samples: graph.theta_samples,
        branches: graph
            .branches
            .iter()
            .map(|b| b.samples.iter().map(|s| [s.theta, s.p]).collect())
            .collect(),
        betas: graph.betas.iter().map(|b| [b.theta, b.p_lo, b.p_hi]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::validate_partition;

    #[test]
    fn polygon_round_trips_bit_for_bit() {
        let text = r#"{"vertices": [[0.0, 0.0], [0.3333333333333333, 0.1], [0.5, 0.7]]}"#;
        let poly = polygon_from_json(text).unwrap();
        let dump = to_json(&poly);
        let back: Vec<[f64; 2]> = serde_json::from_str(&dump).unwrap();
        for (v, [x, y]) in poly.vertices().iter().zip(&back) {
            assert_eq!(v.x.to_bits(), x.to_bits());
            assert_eq!(v.y.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn clockwise_input_is_accepted() {
        let ccw = polygon_from_json(r#"{"vertices": [[0,0],[2,0],[2,1],[0,1]]}"#).unwrap();
        let cw = polygon_from_json(r#"{"vertices": [[0,0],[0,1],[2,1],[2,0]]}"#).unwrap();
        assert_eq!(ccw.area(), cw.area());
        assert!(validate_partition(&ccw, &[cw], 1e-12).tiles_parent);
    }

    #[test]
    fn reflex_vertex_is_named() {
        let err = polygon_from_json(r#"{"vertices": [[0,0],[4,0],[4,4],[2,1],[0,4]]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("vertex 3"), "{err}");
    }

    #[test]
    fn malformed_json_is_an_input_error() {
        let err = polygon_from_json("{\"vertices\": [[0,0],").unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn alpha_dump_matches_fixture_shapes() {
        let tri = polygon_from_json(r#"{"vertices": [[0,0],[2,0],[1,1.7320508075688772]]}"#)
            .unwrap();
        let dump = alpha_dump(&tri);
        assert!(!dump.whole_boundary);
        assert_eq!(dump.ranges.iter().filter(|r| r.proper).count(), 3);
        // Profile windows tile the half-period.
        assert_eq!(dump.profile.first().unwrap().s_lo, 0.0);
        let half = dump.half_period;
        assert!((dump.profile.last().unwrap().s_hi - half).abs() <= 1e-12 * half);

        let sq = polygon_from_json(r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]]}"#).unwrap();
        assert!(alpha_dump(&sq).whole_boundary);
    }

    #[test]
    fn curve_dump_has_branch_polylines() {
        let sq = polygon_from_json(r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]]}"#).unwrap();
        let graph = crate::curves::perimeter_graph(&sq, 64).unwrap();
        let dump = curve_dump(&graph);
        assert_eq!(dump.theta_samples, 64);
        assert!(!dump.branches.is_empty());
        assert!(dump.branches.iter().all(|b| b.iter().all(|s| s[1] > 0.0)));
    }
}
