//! End-to-end checks of the `fairpart` binary: exit codes, file outputs,
//! and the documented diagnostics.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_fairpart")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn write_fixture(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

#[test]
fn partition_square_writes_result_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "sq.json", r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]]}"#);
    let out = dir.path().join("result.json");
    let svg = dir.path().join("result.svg");
    let output = run(&[
        "partition",
        "--n",
        "4",
        "--in",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 0, "{output:?}");

    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["pieces"].as_array().unwrap().len(), 4);
    assert_eq!(v["report"]["piece_count"], 4);
    assert!(v["report"]["all_convex"].as_bool().unwrap());
    assert_eq!(v["cut_tree"]["kind"], "cut");

    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg "));
    assert_eq!(svg_text.matches("<text").count(), 4);
}

#[test]
fn unsupported_piece_count_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "sq.json", r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]]}"#);
    let out = dir.path().join("x.json");
    let output =
        run(&["partition", "--n", "3", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&output), 1);
    assert!(String::from_utf8_lossy(&output.stderr).contains("unsupported piece count"));
    assert!(!out.exists());
}

#[test]
fn reflex_vertex_is_reported_with_its_index() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(
        dir.path(),
        "reflex.json",
        r#"{"vertices": [[0,0],[4,0],[4,4],[2,1],[0,4]]}"#,
    );
    let out = dir.path().join("x.json");
    let output =
        run(&["partition", "--n", "2", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&output), 1);
    assert!(String::from_utf8_lossy(&output.stderr).contains("vertex 3"));
}

#[test]
fn missing_and_malformed_inputs_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let output = run(&["partition", "--n", "2", "--in", "/nonexistent.json", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&output), 1);

    let input = write_fixture(dir.path(), "bad.json", "{\"vertices\": [[0,0],");
    let output =
        run(&["partition", "--n", "2", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&output), 1);

    let output = run(&["alpha", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&output), 1);
}

#[test]
fn impossible_tolerance_is_a_solver_failure() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(
        dir.path(),
        "pent.json",
        r#"{"vertices": [[0.0,0.0],[1.3,0.1],[1.9,0.8],[1.2,1.7],[0.2,1.4]]}"#,
    );
    let out = dir.path().join("x.json");
    let output = run(&[
        "partition",
        "--n",
        "4",
        "--in",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--theta-samples",
        "64",
        "--tol",
        "1e-18",
    ]);
    assert_eq!(code(&output), 2, "{output:?}");
    assert!(String::from_utf8_lossy(&output.stderr).contains("error:"));
}

#[test]
fn small_grids_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "sq.json", r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]]}"#);
    let out = dir.path().join("x.json");
    for cmd in ["partition", "curve"] {
        let mut args = vec![cmd];
        if cmd == "partition" {
            args.extend(["--n", "2"]);
        }
        args.extend(["--in", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        args.extend(["--theta-samples", "32"]);
        let output = run(&args);
        assert_eq!(code(&output), 1, "{cmd}: {output:?}");
        assert!(String::from_utf8_lossy(&output.stderr).contains("at least 64"));
    }
}

#[test]
fn alpha_reports_fixture_structure() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write_fixture(
        dir.path(),
        "tri.json",
        r#"{"vertices": [[0,0],[2,0],[1,1.7320508075688772]]}"#,
    );
    let out = dir.path().join("alpha.json");
    let svg = dir.path().join("alpha.svg");
    let output = run(&[
        "alpha",
        "--in",
        tri.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["whole_boundary"], false);
    let ranges = v["ranges"].as_array().unwrap();
    assert_eq!(ranges.iter().filter(|r| r["proper"] == true).count(), 3);
    assert!(!v["profile"].as_array().unwrap().is_empty());
    assert_eq!(std::fs::read_to_string(&svg).unwrap().matches("<line").count(), 3);

    let sq = write_fixture(dir.path(), "sq.json", r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]]}"#);
    let output = run(&["alpha", "--in", sq.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&output), 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["whole_boundary"], true);
}

#[test]
fn curve_dump_has_plot_ready_arrays() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(
        dir.path(),
        "pent.json",
        r#"{"vertices": [[0.0,0.0],[1.3,0.1],[1.9,0.8],[1.2,1.7],[0.2,1.4]]}"#,
    );
    let out = dir.path().join("curve.json");
    let output = run(&[
        "curve",
        "--in",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--theta-samples",
        "64",
    ]);
    assert_eq!(code(&output), 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["theta_samples"], 64);
    let branches = v["branches"].as_array().unwrap();
    assert!(!branches.is_empty());
    for branch in branches {
        for sample in branch.as_array().unwrap() {
            assert_eq!(sample.as_array().unwrap().len(), 2);
        }
    }
    for beta in v["betas"].as_array().unwrap() {
        assert_eq!(beta.as_array().unwrap().len(), 3);
    }
}

#[test]
fn ensemble_writes_aggregates_and_gates_on_them() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let output = run(&[
        "ensemble",
        "--count",
        "5",
        "--vertices",
        "3..9",
        "--n",
        "2",
        "--seed",
        "31",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 0, "{output:?}");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["success_rate"], 1.0);
    assert_eq!(v["parity_violations"], 0);
    assert_eq!(v["outcomes"].as_array().unwrap().len(), 5);
    assert!(v["perimeter_spread_percentiles"]["max"].as_f64().unwrap() <= 1e-9);

    let output = run(&[
        "ensemble", "--count", "2", "--vertices", "3..5", "--n", "6", "--seed", "1", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 1);

    let output = run(&[
        "ensemble", "--count", "2", "--vertices", "9..3", "--n", "2", "--seed", "1", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 1);
}

#[test]
fn usage_errors_and_help() {
    let output = run(&["--help"]);
    assert_eq!(code(&output), 0);
    assert!(String::from_utf8_lossy(&output.stdout).contains("partition"));

    let output = run(&[]);
    assert_eq!(code(&output), 1);

    let output = run(&["ensemble", "--count", "2", "--vertices", "abc", "--n", "2", "--seed", "1",
        "--out", "/tmp/x.json"]);
    assert_eq!(code(&output), 1);
}
