use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selftile")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn perron_check_examples() {
    let out = run(&["perron-check", "1,2,-1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["class"], "ComplexPerron");
    assert_eq!(r["schema_version"], 1);
    assert!((r["modulus_sq"].as_f64().unwrap() - 2.546).abs() < 1e-3);

    let out = run(&["perron-check", "-2,0,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["class"], "NotPerron");

    let out = run(&["perron-check", "-1,-1,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["class"], "RealPerron");
}

#[test]
fn tile_endo_matrix_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("pqr");
    let out = run(&["tile-endo", "--pqr", "3,1,2,1", "-k", "10", "--out", prefix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("pqr.json")).unwrap()).unwrap();
    assert_eq!(r["subdivision_matrix"], serde_json::json!([[0, 1, 0], [0, 2, 1], [1, 1, 0]]));
    assert_eq!(r["polynomial"], serde_json::json!([1, 2, -1, 1]));
    let svg = std::fs::read_to_string(dir.path().join("pqr.svg")).unwrap();
    assert!(svg.starts_with("<?xml") && svg.contains("<path"));
    assert!(Path::new(&dir.path().join("pqr-layout.svg")).exists());
}

#[test]
fn tile_endo_degenerate_case_runs() {
    let out = run(&["tile-endo", "--pqr", "3,0,0,1", "-k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["subdivision_matrix"], serde_json::json!([[0, 1, 0], [0, 0, 1], [1, 0, 0]]));
}

#[test]
fn negative_exponent_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("endo.json");
    std::fs::write(&path, r#"{"a": "b", "b": "c", "c": "c^-1ab^-2"}"#).unwrap();
    let out = run(&["tile-endo", "--endo", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("negative exponent") && err.contains("[2,3]"), "{err}");
}

#[test]
fn reports_are_deterministic() {
    let a = run(&["tile-endo", "--pqr", "3,1,2,1", "-k", "5"]);
    let b = run(&["tile-endo", "--pqr", "3,1,2,1", "-k", "5", "--jobs", "1"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["lattice", "2,-2,1", "-g", "2"]);
    let b = run(&["lattice", "2,-2,1", "-g", "2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn lattice_patch_covers_exactly() {
    let out = run(&["lattice", "2,-2,1", "-g", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let cover = r["invariants"].as_array().unwrap().iter().find(|v| v["name"] == "exact_cover").unwrap();
    assert_eq!(cover["passed"], true);
    assert_eq!(cover["detail"]["residual"], "0");
    assert_eq!(r["patch"]["generation"], 3);

    let r = json(&run(&["lattice", "2,-2,1", "-g", "0"]));
    assert_eq!(r["patch"]["triangles"].as_array().unwrap().len(), 0);
    assert_eq!(r["patch"]["central_tiles"].as_array().unwrap().len(), 1);

    let out = run(&["lattice", "-1,-1,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonreal"));
}

#[test]
fn grow_with_reduced_exponent() {
    let out = run(&["grow", "2,-2,1", "-g", "8", "--n", "5", "--no-central"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["patch"]["subdivisions"], 16);
    assert_eq!(r["all_invariants_hold"], true);
}

#[test]
fn refine_boundary_reports_distances() {
    let out = run(&["refine-boundary", "2,-2,1", "-k", "2", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    let h = r["hausdorff"].as_array().unwrap();
    assert_eq!(h.len(), 2);
    assert!(h[1].as_f64().unwrap() < h[0].as_f64().unwrap());
}

#[test]
fn zeta_examples() {
    let r = json(&run(&["zeta", "1,-2,4,-3,1", "5"]));
    assert_eq!(r["present"], true);
    assert_eq!(r["representation"], serde_json::json!([-1, 1, 0, 0]));
    assert_eq!(r["verified_exactly"], true);

    let r = json(&run(&["zeta", "1,2,-1,1", "2"]));
    assert_eq!(r["representation"], serde_json::json!([-1, 0, 0]));

    let out = run(&["zeta", "-1,-1,1", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["present"], false);
    assert_eq!(run(&["zeta", "-1,-1,1", "4", "--require"]).status.code(), Some(1));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let prefix = blocker.join("report");
    let out = run(&["perron-check", "1,2,-1,1", "--out", prefix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(run(&["perron-check", "1,x"]).status.code(), Some(2));
    assert_eq!(run(&["tile-endo", "--pqr", "3,1"]).status.code(), Some(2));
    assert_eq!(run(&["tile-endo"]).status.code(), Some(2));
}
