//! End-to-end tests of the `valdist` binary: file formats, exit codes,
//! output precision, and determinism of the verification reports.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_valdist"))
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// ω = ½|a,0⟩ + ½|b,1⟩ and the product of its marginals.
fn entwined_fixtures(dir: &Path) -> (PathBuf, PathBuf) {
    let omega = write(
        dir,
        "omega.json",
        r#"{"points": ["(a,0)", "(b,1)"], "probs": [0.5, 0.5]}"#,
    );
    let product = write(
        dir,
        "product.json",
        r#"{"points": ["(a,0)", "(a,1)", "(b,0)", "(b,1)"],
            "probs": [0.25, 0.25, 0.25, 0.25]}"#,
    );
    (omega, product)
}

fn bell_fixtures(dir: &Path) -> (PathBuf, PathBuf) {
    let bell = write(
        dir,
        "bell.json",
        r#"{"dim": 4, "entries": [
            [[0.5,0],[0,0],[0,0],[0.5,0]],
            [[0,0],[0,0],[0,0],[0,0]],
            [[0,0],[0,0],[0,0],[0,0]],
            [[0.5,0],[0,0],[0,0],[0.5,0]]]}"#,
    );
    let product = write(
        dir,
        "prod.json",
        r#"{"dim": 4, "entries": [
            [[0.25,0],[0,0],[0,0],[0,0]],
            [[0,0],[0.25,0],[0,0],[0,0]],
            [[0,0],[0,0],[0.25,0],[0,0]],
            [[0,0],[0,0],[0,0],[0.25,0]]]}"#,
    );
    (bell, product)
}

#[test]
fn tvd_of_the_entwined_example_prints_a_half() {
    let dir = tempfile::tempdir().unwrap();
    let (omega, product) = entwined_fixtures(dir.path());
    let out = run(&["tvd", omega.to_str().unwrap(), product.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0.500000000000");
}

#[test]
fn trd_of_the_bell_example_prints_three_quarters() {
    let dir = tempfile::tempdir().unwrap();
    let (bell, product) = bell_fixtures(dir.path());
    let out = run(&["trd", bell.to_str().unwrap(), product.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0.750000000000");

    let out = run(&["vld", bell.to_str().unwrap(), product.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "0.750000000000");
}

#[test]
fn entwine_dispatches_on_input_kind() {
    let dir = tempfile::tempdir().unwrap();
    let (omega, _) = entwined_fixtures(dir.path());
    let out = run(&["entwine", omega.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0.500000000000");

    let (bell, prod) = bell_fixtures(dir.path());
    let out = run(&["entwine", bell.to_str().unwrap(), "--dims", "2", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0.750000000000");

    // A product state is not entwined at all.
    let out = run(&["entwine", prod.to_str().unwrap(), "--dims", "2", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0.000000000000");
}

#[test]
fn kvd_reports_value_and_plan() {
    let dir = tempfile::tempdir().unwrap();
    let metric = write(
        dir.path(),
        "space.json",
        r#"{"points": ["a", "b"], "d": [[0.0, 0.5], [0.5, 0.0]]}"#,
    );
    let a = write(
        dir.path(),
        "a.json",
        r#"{"points": ["a","b"], "probs": [0.5, 0.5]}"#,
    );
    let b = write(
        dir.path(),
        "b.json",
        r#"{"points": ["a","b"], "probs": [1.0, 0.0]}"#,
    );
    let out = run(&[
        "kvd",
        "--metric",
        metric.to_str().unwrap(),
        a.to_str().unwrap(),
        b.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0.250000000000");

    let out = run(&[
        "kvd",
        "--metric",
        metric.to_str().unwrap(),
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--plan",
    ]);
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!((doc["value"].as_f64().unwrap() - 0.25).abs() < 1e-9);
    assert!(doc["plan"].as_array().unwrap().len() == 2);
}

#[test]
fn witness_commands_emit_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(
        dir.path(),
        "a.json",
        r#"{"points": ["a","b"], "probs": [0.75, 0.25]}"#,
    );
    let b = write(
        dir.path(),
        "b.json",
        r#"{"points": ["a","b"], "probs": [0.25, 0.75]}"#,
    );
    let out = run(&[
        "--json",
        "witness",
        "tvd",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
    ]);
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(doc["subset"], serde_json::json!(["a"]));
    assert!((doc["gap"].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let (bell, prod) = bell_fixtures(dir.path());
    let out = run(&[
        "--json",
        "witness",
        "trd",
        bell.to_str().unwrap(),
        prod.to_str().unwrap(),
    ]);
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!((doc["gap"].as_f64().unwrap() - 0.75).abs() < 1e-9);
    // The witness is the projection onto the Bell vector.
    assert!((doc["effect"]["entries"][0][0][0].as_f64().unwrap() - 0.5).abs() < 1e-9);

    let metric = write(
        dir.path(),
        "space.json",
        r#"{"points": ["a", "b"], "d": [[0.0, 0.5], [0.5, 0.0]]}"#,
    );
    let out = run(&[
        "--json",
        "witness",
        "kvd",
        "--metric",
        metric.to_str().unwrap(),
        a.to_str().unwrap(),
        b.to_str().unwrap(),
    ]);
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(doc["values"].as_array().unwrap().len(), 2);
    assert!((doc["gap"].as_f64().unwrap() - 0.25).abs() < 1e-7);
}

#[test]
fn ard_outputs_agreement_document() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.json", "0.25");
    let y = write(dir.path(), "y.json", "0.875");
    let out = run(&[
        "ard",
        "--model",
        "scalar",
        x.to_str().unwrap(),
        y.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!((doc["direct"].as_f64().unwrap() - 0.625).abs() < 1e-12);
    assert_eq!(doc["agree"], serde_json::json!(true));

    let p = write(
        dir.path(),
        "p.json",
        r#"{"points": ["a","b"], "values": [0.3, 0.3]}"#,
    );
    let q = write(
        dir.path(),
        "q.json",
        r#"{"points": ["a","b"], "values": [0.7, 0.7]}"#,
    );
    let out = run(&[
        "ard",
        "--model",
        "fuzzy",
        p.to_str().unwrap(),
        q.to_str().unwrap(),
    ]);
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!((doc["ard"].as_f64().unwrap() - 0.4).abs() < 1e-8);
}

#[test]
fn verify_is_deterministic_and_exit_codes_hold() {
    let first = run(&["verify", "--suite", "dist-core", "--seed", "42"]);
    assert!(first.status.success());
    let second = run(&["verify", "--suite", "dist-core", "--seed", "42"]);
    assert_eq!(stdout(&first), stdout(&second));

    let as_json = run(&["--json", "verify", "--suite", "dist-core", "--seed", "42"]);
    let doc: serde_json::Value = serde_json::from_str(stdout(&as_json).trim()).unwrap();
    assert_eq!(doc["failed"], serde_json::json!(0));
    assert!(doc["checks"].as_array().unwrap().len() >= 4);

    let bad_suite = run(&["verify", "--suite", "nosuch"]);
    assert_eq!(bad_suite.status.code(), Some(2));

    let unknown_verb = bin().arg("frobnicate").output().unwrap();
    assert_eq!(unknown_verb.status.code(), Some(2));
}

#[test]
fn malformed_input_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"points": ["a"], "probs": [0.7]}"#,
    );
    let out = run(&["tvd", bad.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    let missing = run(&["tvd", "/nonexistent/x.json", "/nonexistent/y.json"]);
    assert_eq!(missing.status.code(), Some(1));

    // entwine needs pair labels classically, matching dims quantumly.
    let flat = write(
        dir.path(),
        "flat.json",
        r#"{"points": ["a","b"], "probs": [0.5, 0.5]}"#,
    );
    let out = run(&["entwine", flat.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let (bell, _) = bell_fixtures(dir.path());
    let out = run(&["entwine", bell.to_str().unwrap(), "--dims", "3", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn triangle_verify_reports_roundtrips() {
    let out = run(&[
        "triangle-verify",
        "--size",
        "2",
        "--trials",
        "5",
        "--seed",
        "1",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(doc["pass"], serde_json::json!(true));
    assert!(doc["effect_roundtrip"].as_f64().unwrap() <= 1e-7);

    // Same invocation reproduces the same report.
    let again = run(&[
        "triangle-verify",
        "--size",
        "2",
        "--trials",
        "5",
        "--seed",
        "1",
    ]);
    assert_eq!(stdout(&out), stdout(&again));
}

#[test]
fn json_mode_wraps_distance_values() {
    let dir = tempfile::tempdir().unwrap();
    let (omega, product) = entwined_fixtures(dir.path());
    let out = run(&[
        "--json",
        "tvd",
        omega.to_str().unwrap(),
        product.to_str().unwrap(),
    ]);
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(doc["command"], serde_json::json!("tvd"));
    assert!((doc["value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}
