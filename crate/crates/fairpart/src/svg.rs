//! Deterministic SVG renderings of partitions and fair bisectors.
//!
//! Pure string emission: the viewBox is the polygon's bounding box expanded
//! by a 5% margin, coordinates are reflected so the y axis points up, and
//! elements are written in a fixed order, so identical inputs produce
//! identical bytes.

use std::fmt::Write;

use crate::bisect::fair_ranges;
use crate::geom::{Point, Polygon};
use crate::partition::{CutTree, FairPartitionResult};

const PIECE_FILLS: [&str; 8] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
];

struct Frame {
    x_lo: f64,
    y_lo: f64,
    w: f64,
    h: f64,
    // Reflection line for the y flip.
    y_sum: f64,
    scale: f64,
}

impl Frame {
    fn around(poly: &Polygon) -> Frame {
        let (mut x_lo, mut y_lo) = (f64::INFINITY, f64::INFINITY);
        let (mut x_hi, mut y_hi) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in poly.vertices() {
            x_lo = x_lo.min(v.x);
            y_lo = y_lo.min(v.y);
            x_hi = x_hi.max(v.x);
            y_hi = y_hi.max(v.y);
        }
        let margin = 0.05 * (x_hi - x_lo).max(y_hi - y_lo);
        Frame {
            x_lo: x_lo - margin,
            y_lo: y_lo - margin,
            w: x_hi - x_lo + 2.0 * margin,
            h: y_hi - y_lo + 2.0 * margin,
            y_sum: y_lo + y_hi,
            scale: poly.scale(),
        }
    }

    fn flip(&self, p: Point) -> (f64, f64) {
        (p.x, self.y_sum - p.y)
    }

    fn open(&self, out: &mut String) {
        // The y flip reflects the box onto itself, so the viewBox is just
        // the margined bounds.
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"640\">",
            self.x_lo, self.y_lo, self.w, self.h
        );
    }

    fn polygon(&self, out: &mut String, poly: &Polygon, style: &str) {
        let mut points = String::new();
        for v in poly.vertices() {
            let (x, y) = self.flip(*v);
            let _ = write!(points, "{x},{y} ");
        }
        let _ = writeln!(out, "<polygon points=\"{}\" {style}/>", points.trim_end());
    }

    fn line(&self, out: &mut String, a: Point, b: Point, style: &str) {
        let (x1, y1) = self.flip(a);
        let (x2, y2) = self.flip(b);
        let _ = writeln!(out, "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" {style}/>");
    }

    fn label(&self, out: &mut String, at: Point, text: &str) {
        let (x, y) = self.flip(at);
        let _ = writeln!(
            out,
            "<text x=\"{x}\" y=\"{y}\" font-size=\"{}\" text-anchor=\"middle\" \
             font-family=\"sans-serif\">{text}</text>",
            0.035 * self.scale
        );
    }

    fn stroke(&self) -> f64 {
        0.004 * self.scale
    }
}

/// Collect the cut chords of a tree by re-cutting the parent the way the
/// solver did.
fn collect_chords(poly: &Polygon, tree: &CutTree, out: &mut Vec<(Point, Point)>) {
    if let CutTree::Cut { s_start, s_end, left, right, .. } = tree {
        let Ok(chord) = poly.chord_at(*s_start, *s_end) else {
            return;
        };
        out.push((chord.start, chord.end));
        if let Ok((a, b)) = poly.cut(&chord) {
            collect_chords(&a, left, out);
            collect_chords(&b, right, out);
        }
    }
}

/// Render a verified partition: filled pieces, the parent outline, the cut
/// chords, and an area/perimeter label per piece.
pub fn partition_svg(parent: &Polygon, result: &FairPartitionResult) -> String {
    let frame = Frame::around(parent);
    let mut out = String::new();
    frame.open(&mut out);
    for (i, piece) in result.pieces.iter().enumerate() {
        let style = format!(
            "fill=\"{}\" fill-opacity=\"0.6\" stroke=\"none\"",
            PIECE_FILLS[i % PIECE_FILLS.len()]
        );
        frame.polygon(&mut out, piece, &style);
    }
    let mut chords = Vec::new();
    collect_chords(parent, &result.cut_tree, &mut chords);
    let chord_style = format!("stroke=\"#d62728\" stroke-width=\"{}\"", frame.stroke());
    for (a, b) in chords {
        frame.line(&mut out, a, b, &chord_style);
    }
    let outline = format!("fill=\"none\" stroke=\"#000\" stroke-width=\"{}\"", frame.stroke());
    frame.polygon(&mut out, parent, &outline);
    for (i, piece) in result.pieces.iter().enumerate() {
        let text = format!(
            "{i}: A={:.6} P={:.6}",
            result.report.areas[i], result.report.perimeters[i]
        );
        frame.label(&mut out, piece.centroid(), &text);
    }
    out.push_str("</svg>\n");
    out
}

/// Render a polygon with one chord per fair range: proper ranges solid, an
/// interval range as its two extreme chords dashed, and a whole-boundary
/// continuum as eight dashed samples.
pub fn alpha_svg(poly: &Polygon) -> String {
    let frame = Frame::around(poly);
    let mut out = String::new();
    frame.open(&mut out);
    let outline = format!("fill=\"#f0f0f0\" stroke=\"#000\" stroke-width=\"{}\"", frame.stroke());
    frame.polygon(&mut out, poly, &outline);
    let solid = format!("stroke=\"#d62728\" stroke-width=\"{}\"", frame.stroke());
    let dashed = format!(
        "stroke=\"#1f77b4\" stroke-width=\"{0}\" stroke-dasharray=\"{1},{1}\"",
        frame.stroke(),
        0.02 * frame.scale
    );
    let half = 0.5 * poly.perimeter();
    let chord = |out: &mut String, s: f64, style: &str| {
        let a = poly.boundary_point(s);
        let b = poly.boundary_point(s + half);
        frame.line(out, a, b, style);
    };
    for r in fair_ranges(poly) {
        if r.whole_boundary {
            for k in 0..8 {
                chord(&mut out, half * k as f64 / 8.0, &dashed);
            }
        } else if r.is_point(1e-9 * poly.scale()) {
            chord(&mut out, r.rep(), if r.proper { &solid } else { &dashed });
        } else {
            chord(&mut out, r.s_lo, &dashed);
            chord(&mut out, r.s_hi, &dashed);
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::fair_partition_4;

    fn square() -> Polygon {
        Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn partition_render_is_deterministic_and_complete() {
        let sq = square();
        let result = fair_partition_4(&sq).unwrap();
        let svg = partition_svg(&sq, &result);
        assert_eq!(svg, partition_svg(&sq, &result));
        assert_eq!(svg.matches("<polygon").count(), 4 + 1);
        assert_eq!(svg.matches("<text").count(), 4);
        assert_eq!(svg.matches("<line").count(), 3);
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn alpha_render_marks_the_continuum() {
        let svg = alpha_svg(&square());
        assert_eq!(svg.matches("<line").count(), 8);
        assert!(svg.contains("dasharray"));

        let tri = Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 3.0f64.sqrt()),
        ])
        .unwrap();
        let svg = alpha_svg(&tri);
        assert_eq!(svg.matches("<line").count(), 3);
        assert!(!svg.contains("dasharray"));
    }
}
