//! Acceptance gate: every release criterion as one test, each ending in a
//! single pass line with the measured numbers. Tolerances are the contract;
//! loosening them here is not allowed.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fairpart::bisect::{alpha, fair_bisectors, fair_ranges, AlphaProfile};
use fairpart::curves::{perimeter_graph, phase_intersections, spanning_component, PeriodicCurve};
use fairpart::gen::{random_polygon_suite, random_scalene_triangle};
use fairpart::{
    fair_partition_2, fair_partition_4, fair_partition_pow2, naive_recursive_4, Point, Polygon,
};

fn poly(verts: &[(f64, f64)]) -> Polygon {
    Polygon::new(verts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
}

fn equilateral() -> Polygon {
    poly(&[(0.0, 0.0), (2.0, 0.0), (1.0, 3.0f64.sqrt())])
}

fn dist(a: Point, b: Point) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
}

#[test]
fn criterion_1_bisector_fixtures() {
    // Equilateral triangle: exactly the three medians.
    let start = Instant::now();
    let tri = equilateral();
    let tol = 1e-9 * tri.scale();
    let found = fair_bisectors(&tri);
    assert_eq!(found.len(), 3, "expected the three medians, got {found:?}");
    let h = 3.0f64.sqrt();
    let medians = [
        (Point::new(0.0, 0.0), Point::new(1.5, h / 2.0)),
        (Point::new(2.0, 0.0), Point::new(0.5, h / 2.0)),
        (Point::new(1.0, h), Point::new(1.0, 0.0)),
    ];
    for (vertex, midpoint) in medians {
        let hit = found.iter().any(|(_, c, _)| {
            (dist(c.start, vertex) <= tol && dist(c.end, midpoint) <= tol)
                || (dist(c.end, vertex) <= tol && dist(c.start, midpoint) <= tol)
        });
        assert!(hit, "no bisector matches median {vertex:?} -> {midpoint:?}");
    }
    assert!(start.elapsed() < Duration::from_secs(1));

    // Narrow isosceles triangle (apex angle ~18.9° < 30°): only the apex
    // bisector survives.
    let start = Instant::now();
    let iso = poly(&[(-0.5, 0.0), (0.5, 0.0), (0.0, 3.0)]);
    let tol = 1e-9 * iso.scale();
    let found = fair_bisectors(&iso);
    assert_eq!(found.len(), 1, "expected only the apex bisector, got {found:?}");
    let (apex, base_mid) = (Point::new(0.0, 3.0), Point::new(0.0, 0.0));
    let c = &found[0].1;
    assert!(
        (dist(c.start, apex) <= tol && dist(c.end, base_mid) <= tol)
            || (dist(c.end, apex) <= tol && dist(c.start, base_mid) <= tol),
        "chord {c:?} is not the apex bisector"
    );
    assert!(start.elapsed() < Duration::from_secs(1));

    // Rectangle: the whole boundary is one fair continuum.
    let start = Instant::now();
    let rect = poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)]);
    let ranges = fair_ranges(&rect);
    assert!(
        ranges.iter().any(|r| r.whole_boundary && r.proper),
        "rectangle must report the whole-boundary continuum, got {ranges:?}"
    );
    assert!(start.elapsed() < Duration::from_secs(1));

    println!("criterion 1 (bisector fixtures): PASS");
}

#[test]
fn criterion_2_profile_matches_direct_alpha() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let mut max_err = 0.0f64;
    for (_, poly) in random_polygon_suite(42, 100, 3, 12) {
        let profile = AlphaProfile::build(&poly);
        let period = poly.perimeter();
        for _ in 0..1000 {
            let s = rng.random_range(0.0..period);
            max_err = max_err.max((profile.eval(s) - alpha(&poly, s)).abs());
        }
    }
    let elapsed = start.elapsed();
    assert!(max_err <= 1e-10, "profile vs direct alpha max err {max_err:.3e}");
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!(
        "criterion 2 (alpha profile oracle, 100 polygons x 1000 samples): PASS \
         (max err {max_err:.3e}, {elapsed:.2?})"
    );
}

#[test]
fn criterion_3_proper_range_count_is_odd() {
    let mut odd = 0;
    for (seed, poly) in random_polygon_suite(42, 100, 3, 12) {
        let proper = fair_ranges(&poly).iter().filter(|r| r.proper).count();
        assert!(proper % 2 == 1, "seed {seed}: proper count {proper} is even");
        odd += 1;
    }
    assert_eq!(odd, 100);
    println!("criterion 3 (odd proper fair-range count): PASS (100/100)");
}

#[test]
fn criterion_4_halving_solver() {
    let start = Instant::now();
    let mut worst = (0.0f64, 0.0f64);
    for (seed, poly) in random_polygon_suite(4242, 100, 3, 12) {
        let result = fair_partition_2(&poly).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let report = &result.report;
        assert!(report.all_convex && report.tiles_parent, "seed {seed}: {report:?}");
        assert!(report.area_spread <= 1e-9, "seed {seed}: area {:.3e}", report.area_spread);
        assert!(
            report.perimeter_spread <= 1e-9,
            "seed {seed}: perimeter {:.3e}",
            report.perimeter_spread
        );
        worst.0 = worst.0.max(report.area_spread);
        worst.1 = worst.1.max(report.perimeter_spread);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!(
        "criterion 4 (100/100 halvings): PASS (worst area {:.3e}, perimeter {:.3e}, {elapsed:.2?})",
        worst.0, worst.1
    );
}

#[test]
fn criterion_5_quartering_solver_and_graph_invariants() {
    let start = Instant::now();
    let mut worst = (0.0f64, 0.0f64);
    for (seed, poly) in random_polygon_suite(1000, 50, 3, 12) {
        let result = fair_partition_4(&poly).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let report = &result.report;
        assert_eq!(result.pieces.len(), 4);
        assert!(report.all_convex && report.tiles_parent, "seed {seed}: {report:?}");
        assert!(report.area_spread <= 1e-8, "seed {seed}: area {:.3e}", report.area_spread);
        assert!(
            report.perimeter_spread <= 1e-6,
            "seed {seed}: perimeter {:.3e}",
            report.perimeter_spread
        );
        worst.0 = worst.0.max(report.area_spread);
        worst.1 = worst.1.max(report.perimeter_spread);

        // Graph invariants at the default grid: odd crossing count at every
        // sampled direction, even branch attachment per vertical segment,
        // and a component spanning the whole period.
        let graph = perimeter_graph(&poly, 256).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        for k in 0..256 {
            let alive = graph.alive_at(k).len();
            assert!(alive % 2 == 1, "seed {seed}: {alive} crossings at sample {k}");
        }
        for beta in &graph.betas {
            assert!(
                beta.attach.len() % 2 == 0,
                "seed {seed}: beta at theta {} attaches {} branch ends",
                beta.theta,
                beta.attach.len()
            );
        }
        spanning_component(&graph).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    println!(
        "criterion 5 (50/50 quarterings + graph invariants): PASS \
         (worst area {:.3e}, perimeter {:.3e}, {elapsed:.2?})",
        worst.0, worst.1
    );
}

#[test]
fn criterion_6_naive_recursion_fails_where_quartering_succeeds() {
    let mut gaps = Vec::new();
    for i in 0..50 {
        let tri = random_scalene_triangle(6000 + i);
        let (naive, gap) = naive_recursive_4(&tri).unwrap_or_else(|e| panic!("seed {i}: {e}"));
        assert!(
            naive.report.area_spread <= 1e-9,
            "seed {i}: naive area spread {:.3e}",
            naive.report.area_spread
        );
        gaps.push(gap);
        let fair = fair_partition_4(&tri).unwrap_or_else(|e| panic!("seed {i}: {e}"));
        assert!(
            fair.report.perimeter_spread <= 1e-6,
            "seed {i}: fair perimeter spread {:.3e}",
            fair.report.perimeter_spread
        );
    }
    gaps.sort_by(f64::total_cmp);
    let median = gaps[gaps.len() / 2];
    assert!(median > 1e-3, "median naive perimeter gap {median:.3e} is too small");
    println!(
        "criterion 6 (naive recursion vs quartering on 50 scalene triangles): PASS \
         (median naive gap {median:.3e})"
    );
}

#[test]
fn criterion_7_eighths_solver() {
    let start = Instant::now();
    let mut cases: Vec<(String, Polygon)> = vec![
        ("unit square".into(), poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])),
        ("equilateral".into(), equilateral()),
    ];
    for (seed, p) in random_polygon_suite(7000, 5, 3, 12) {
        cases.push((format!("seed {seed}"), p));
    }
    let mut worst = (0.0f64, 0.0f64);
    for (name, p) in &cases {
        let result = fair_partition_pow2(p, 3).unwrap_or_else(|e| panic!("{name}: {e}"));
        let report = &result.report;
        assert_eq!(result.pieces.len(), 8);
        assert!(report.all_convex && report.tiles_parent, "{name}: {report:?}");
        assert!(report.area_spread <= 1e-8, "{name}: area {:.3e}", report.area_spread);
        assert!(
            report.perimeter_spread <= 1e-5,
            "{name}: perimeter {:.3e}",
            report.perimeter_spread
        );
        worst.0 = worst.0.max(report.area_spread);
        worst.1 = worst.1.max(report.perimeter_spread);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1200), "took {elapsed:?}");
    println!(
        "criterion 7 (7/7 eighths): PASS (worst area {:.3e}, perimeter {:.3e}, {elapsed:.2?})",
        worst.0, worst.1
    );
}

#[test]
fn criterion_8_synthetic_phase_curves() {
    // p(θ) = 2 + sin θ meets its half-turn shift exactly at θ ∈ {0, π}.
    let g = 64;
    let ps: Vec<f64> = (0..g).map(|k| 2.0 + (2.0 * PI * k as f64 / g as f64).sin()).collect();
    let curve = PeriodicCurve::from_samples(ps).unwrap();
    let hits = phase_intersections(&curve);
    assert_eq!(hits.len(), 2, "{hits:?}");
    assert_eq!(hits[0].theta, 0.0);
    assert_eq!(hits[1].theta, PI);
    for h in &hits {
        let d = (2.0 + h.theta.sin()) - (2.0 + (h.theta + PI).sin());
        assert!(d.abs() <= 1e-12, "residual {d:.3e} at theta {}", h.theta);
        assert!(h.proper);
    }
    let pairs = hits.iter().filter(|h| h.theta < PI).count();
    assert_eq!(pairs, 1, "expected exactly one proper pair");

    // A curve coinciding with its shift reports canonical representatives
    // instead of erroring out.
    let flat = PeriodicCurve::from_samples(vec![2.0; g]).unwrap();
    let hits = phase_intersections(&flat);
    assert!(!hits.is_empty());
    assert!(hits.iter().all(|h| h.coincident));
    assert_eq!(hits[0].theta, 0.0);

    println!("criterion 8 (synthetic phase curves): PASS");
}

#[test]
fn criterion_9_byte_identical_reruns() {
    let bin = env!("CARGO_BIN_EXE_fairpart");
    let dir = tempfile::tempdir().unwrap();
    let poly_path = dir.path().join("poly.json");
    std::fs::write(
        &poly_path,
        r#"{"vertices": [[0.0,0.0],[1.3,0.1],[1.9,0.8],[1.2,1.7],[0.2,1.4]]}"#,
    )
    .unwrap();

    let run = |tag: &str, args: &[&str]| -> Vec<u8> {
        let out_path = dir.path().join(format!("{tag}.json"));
        let mut cmd = Command::new(bin);
        cmd.args(args);
        cmd.arg("--out").arg(&out_path);
        let output = cmd.output().unwrap();
        assert!(output.status.success(), "{tag}: {output:?}");
        std::fs::read(&out_path).unwrap()
    };
    let partition_args =
        ["partition", "--n", "4", "--in", poly_path.to_str().unwrap(), "--theta-samples", "128"];
    let alpha_args = ["alpha", "--in", poly_path.to_str().unwrap()];
    let curve_args = ["curve", "--in", poly_path.to_str().unwrap(), "--theta-samples", "64"];
    for (tag, args) in
        [("partition", &partition_args[..]), ("alpha", &alpha_args[..]), ("curve", &curve_args[..])]
    {
        let first = run(tag, args);
        let second = run(tag, args);
        assert_eq!(first, second, "{tag} output differs between runs");
    }

    // The ensemble report records wall-clock runtimes; everything else must
    // be byte-stable, so compare with runtimes zeroed.
    let ensemble_args =
        ["ensemble", "--count", "4", "--vertices", "3..8", "--n", "2", "--seed", "9"];
    let normalize = |bytes: &[u8]| -> String {
        let mut v: serde_json::Value = serde_json::from_slice(bytes).unwrap();
        for o in v["outcomes"].as_array_mut().unwrap() {
            o["runtime_ms"] = 0.0.into();
        }
        v.to_string()
    };
    let first = run("ensemble", &ensemble_args);
    let second = run("ensemble", &ensemble_args);
    assert_eq!(normalize(&first), normalize(&second), "ensemble reports differ beyond runtimes");

    println!("criterion 9 (byte-identical reruns): PASS");
}

/// The JSON written by the partition command re-parses into the same pieces
/// bit for bit.
#[test]
fn partition_json_round_trips_bitwise() {
    let bin = env!("CARGO_BIN_EXE_fairpart");
    let dir = tempfile::tempdir().unwrap();
    let poly_path = dir.path().join("poly.json");
    std::fs::write(&poly_path, r#"{"vertices": [[0.0,0.0],[2.0,0.0],[1.0,1.7320508075688772]]}"#)
        .unwrap();
    let out_path = dir.path().join("result.json");
    let output = Command::new(bin)
        .args(["partition", "--n", "2", "--in"])
        .arg(&poly_path)
        .arg("--out")
        .arg(&out_path)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let text = std::fs::read_to_string(&out_path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let pieces: Vec<Vec<[f64; 2]>> =
        serde_json::from_value(v["pieces"].clone()).expect("pieces parse as vertex lists");
    let reparsed = fairpart::io::to_json(&pieces
        .iter()
        .map(|verts| {
            Polygon::new(verts.iter().map(|&[x, y]| Point::new(x, y)).collect()).unwrap()
        })
        .collect::<Vec<_>>());
    let direct = fairpart::io::to_json(&v["pieces"]);
    assert_eq!(reparsed, direct, "vertex bits changed across a parse cycle");
}
