use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_descentlab"));
    c.current_dir(env!("CARGO_MANIFEST_DIR")).env("DESCENTLAB_THREADS", "1");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn fixture(dir: &Path, name: &str) -> PathBuf {
    let p = dir.join(format!("{name}.json"));
    let out = run(&["fixture", name, "--out", p.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    p
}

#[test]
fn descent_on_triangle_boundary_passes() {
    let out = run(&["descent", "--input", "tests/golden/triangle-boundary.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"]["global_betti"], serde_json::json!({"0": 1, "1": 1}));
    assert_eq!(v["results"]["cech_betti"], serde_json::json!({"0": 1, "1": 1}));
    assert_eq!(v["checks"][0]["anchor"], "cech-descent");
}

#[test]
fn descent_on_disjoint_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let p = fixture(dir.path(), "disjoint");
    let out = run(&["descent", "--input", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["results"]["witness_degree"], 0);
    assert_eq!(v["checks"][0]["passed"], false);
    assert!(v["checks"][0]["witness"].as_str().unwrap().contains("degree 0"));
}

#[test]
fn malformed_json_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"N\": 2, \"values\": [").unwrap();
    for cmd in ["validate", "descent", "tot", "homology", "covers-check"] {
        let out = run(&[cmd, "--input", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{cmd}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn unknown_fixture_and_range_errors_exit_2() {
    assert_eq!(run(&["fixture", "no-such-thing"]).status.code(), Some(2));
    assert_eq!(run(&["p1-demo", "--laurent-cutoff", "2"]).status.code(), Some(2));
    assert_eq!(run(&["p1-demo", "--laurent-cutoff", "13"]).status.code(), Some(2));
    assert_eq!(run(&["telescope", "--novikov-e", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["cech", "--degree-window", "3:1", "--input", "tests/golden/triangle-boundary.json"]).status.code(), Some(2));
    assert_eq!(run(&["descent"]).status.code(), Some(2));
}

#[test]
fn incl_excl_rejects_two_member_covers() {
    let out = run(&["incl-excl", "--input", "tests/golden/triangle-boundary.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn every_listed_fixture_round_trips_through_validate() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["triangle-boundary", "triangle-three-edges", "square", "disjoint", "constant", "random", "triangle-cdga", "random-cdga"] {
        let p = fixture(dir.path(), name);
        let out = run(&["validate", "--input", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn validate_reports_structural_failure_as_math_failure() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.json");
    // d1 d0 ≠ 0: ℚ → ℚ → ℚ with both maps the identity.
    std::fs::write(&p, r#"{"coeff": "Q", "dims": {"0": 1, "1": 1, "2": 1}, "diff": {"0": [[0, 0, "1"]], "1": [[0, 0, "1"]]}}"#).unwrap();
    let out = run(&["validate", "--input", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(json(&out)["checks"][0]["witness"].is_string());
}

#[test]
fn output_is_deterministic_across_runs_and_threads() {
    for args in [&["tot", "--input", "tests/golden/square.json"][..], &["bv-check"][..], &["covers-check", "--input", "tests/golden/half-plane-cover.json"][..]] {
        let a = run(args);
        let b = run(args);
        let c = bin().args(args).env("DESCENTLAB_THREADS", "4").output().unwrap();
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, c.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let a = run(&["p1-demo"]);
    let b = run(&["p1-demo", "--out", p.to_str().unwrap()]);
    assert!(b.status.success() && b.stdout.is_empty());
    assert_eq!(a.stdout, std::fs::read(&p).unwrap());
}

#[test]
fn text_format_ends_with_status() {
    let out = run(&["descent", "--format", "text", "--input", "tests/golden/triangle-boundary.json"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.trim_end().ends_with("status: PASS"), "{s}");
}

#[test]
fn compare_exposes_the_cech_cup_noncommutativity() {
    let out = run(&["compare", "--input", "tests/golden/triangle-cdga.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let w = &v["results"]["cech_cup_noncommutativity_witness"];
    assert!(w.is_object());
    assert_ne!(w["xy"], w["yx"]);
}

#[test]
fn telescope_of_t_multiplication_is_pure_torsion() {
    for e in ["3", "5/2"] {
        let out = run(&["telescope", "--novikov-e", e]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json(&out)["results"]["pure_torsion"], true);
    }
}

/// Reports checked against files under `tests/golden`; set `UPDATE_GOLDEN=1`
/// to rewrite them.
#[test]
fn golden_reports() {
    let cases: &[(&str, &[&str])] = &[
        ("descent-triangle-boundary", &["descent", "--input", "tests/golden/triangle-boundary.json"]),
        ("tot-square", &["tot", "--input", "tests/golden/square.json"]),
        ("incl-excl-square", &["incl-excl", "--input", "tests/golden/square.json"]),
        ("tw-triangle-three-edges", &["tw", "--input", "tests/golden/triangle-three-edges.json"]),
        ("compare-triangle-cdga", &["compare", "--input", "tests/golden/triangle-cdga.json"]),
        ("p1-demo", &["p1-demo", "--format", "text"]),
        ("covers-check", &["covers-check", "--input", "tests/golden/half-plane-cover.json", "--format", "text"]),
        ("telescope", &["telescope"]),
    ];
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in cases {
        let out = run(args);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let ext = if args.contains(&"text") { "txt" } else { "out.json" };
        let path = golden_dir().join(format!("{name}.{ext}"));
        if update {
            std::fs::write(&path, &out.stdout).unwrap();
        } else {
            let want = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&want), "{name}");
        }
    }
}
