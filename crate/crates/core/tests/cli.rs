use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use linegroupoid::verify::fixtures;
use serde_json::Value;

fn linegroupoid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linegroupoid")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn run_emits_json_lines_with_summary_last() {
    let out = linegroupoid(&["run", "--suite", "poisson", "--samples", "20", "--n", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let (summary, checks) = lines.split_last().unwrap();
    assert_eq!(summary["kind"], "summary");
    assert_eq!(summary["n"], 2);
    assert_eq!(summary["checks"].as_u64().unwrap() as usize, checks.len());
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort_unstable();
    assert_eq!(names, sorted);
    for c in checks {
        assert_eq!(c["kind"], "check");
        assert_eq!(c["suite"], "poisson");
        assert!(!c["anchor"].as_str().unwrap().is_empty());
    }
}

#[test]
fn failing_check_sets_exit_status_and_witness() {
    let out = linegroupoid(&["run", "--suite", "iwasawa", "--samples", "20", "--tol", "factorization=0"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    let failing: Value = text
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .find(|v| v["name"] == "iwasawa-factorization-reconstruction")
        .unwrap();
    assert_eq!(failing["pass"], false);
    assert_eq!(failing["tolerance"], 0.0);
    assert!(failing["witness"]["g"].is_array());
}

#[test]
fn text_format_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = linegroupoid(&["run", "--suite", "relations", "--samples", "5", "--format", "text", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(path).unwrap();
    assert!(text.lines().any(|l| l.starts_with("PASS relations-s3-conjugation-quotient-rejected")));
    assert!(text.lines().last().unwrap().contains("checks passed"));
}

#[test]
fn invalid_configuration_prints_usage() {
    for args in [
        &["run", "--samples", "0"][..],
        &["run", "--n", "1"],
        &["run", "--tol", "nonsense=1"],
        &["run", "--tol", "recon"],
        &["run", "--suite", "other"],
        &["run", "--format", "xml"],
    ] {
        let out = linegroupoid(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains("error"), "{args:?}: {err}");
        assert!(err.contains("--help"), "{args:?}: {err}");
    }
}

#[test]
fn quotient_by_trivial_action_copies_input() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", fixtures::S3_GROUPOID);
    let a = write(dir.path(), "a.json", fixtures::TRIVIAL_ACTION);
    let out = linegroupoid(&["quotient", "--groupoid", &g, "--action", &a]);
    assert!(out.status.success());
    let v = json(&out);
    let input: Value = serde_json::from_str(fixtures::S3_GROUPOID).unwrap();
    assert_eq!(v["status"], "quotient");
    assert_eq!(v["groupoid"]["elements"], input["elements"]);
    assert_eq!(v["groupoid"]["units"], input["units"]);
    assert_eq!(v["transpose_is_monomorphism"], true);
}

#[test]
fn quotient_of_s3_by_conjugation_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", fixtures::S3_GROUPOID);
    let a = write(dir.path(), "a.json", fixtures::S3_INNER_ACTION);
    let out_path = dir.path().join("out.json");
    let out = linegroupoid(&["quotient", "--groupoid", &g, "--action", &a, "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(v["status"], "violation");
    assert_eq!(v["kind"], "inverse-product-not-unit");
    let w = &v["witness"];
    for key in ["orbit", "inverse_orbit", "product_orbit", "orbit_members", "product_orbit_members", "triple"] {
        assert!(!w[key].is_null(), "missing {key}");
    }
}

#[test]
fn quotient_of_bundle_lives_over_two_points() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", fixtures::BUNDLE_GROUPOID);
    let a = write(dir.path(), "a.json", fixtures::BUNDLE_ACTION);
    let v = json(&linegroupoid(&["quotient", "--groupoid", &g, "--action", &a]));
    assert_eq!(v["status"], "quotient");
    assert_eq!(v["groupoid"]["units"].as_array().unwrap().len(), 2);
    assert_eq!(v["transpose_is_morphism"], true);
}

#[test]
fn quotient_rejects_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", "{\"elements\": [0]}");
    let a = write(dir.path(), "a.json", fixtures::TRIVIAL_ACTION);
    let out = linegroupoid(&["quotient", "--groupoid", &g, "--action", &a]);
    assert_eq!(out.status.code(), Some(2));
    let missing = linegroupoid(&["quotient", "--groupoid", "/nonexistent/g.json", "--action", &a]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8(missing.stderr).unwrap().contains("/nonexistent/g.json"));
}

#[test]
fn decompose_fixture_and_identity() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", fixtures::LORENTZ_MATRIX);
    let v = json(&linegroupoid(&["decompose", "--matrix", &m]));
    assert_eq!(v["n"], 3);
    assert!(v["residual_bc"].as_f64().unwrap() < 1e-12);
    assert!(v["residual_cb"].as_f64().unwrap() < 1e-12);
    assert_eq!(v["rotation_left"].as_array().unwrap().len(), 4);

    let id = write(dir.path(), "id.json", "[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]");
    let v = json(&linegroupoid(&["decompose", "--matrix", &id]));
    assert_eq!(v["residual_bc"], 0.0);
    assert_eq!(v["boost_right"]["s"], 1.0);
    assert_eq!(v["boost_right"]["y"], serde_json::json!([0.0, 0.0]));
}

#[test]
fn decompose_names_the_violated_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", "[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,-1]]");
    let out = linegroupoid(&["decompose", "--matrix", &m]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("determinant") || err.contains("metric"), "{err}");
}
