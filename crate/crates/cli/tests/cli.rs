use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_charmorph"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const EXAMPLE_ONE: &str = r#"{"field": "Q", "group": [2, 2], "alphas": ["37/16"]}"#;

/// The config block of a fixture file as a standalone config.
fn fixture_config(dir: &Path, name: &str) -> String {
    let fx: Value = serde_json::from_str(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
    write(dir, "config.json", &fx["config"].to_string())
}

#[test]
fn construct_then_analyze_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", EXAMPLE_ONE);
    let out = dir.path().join("out.json");
    let o = run(&["construct", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["data"]["v"][0], "(41)");
    assert_eq!(doc["data"]["w"][0], "(137)");
    assert_eq!(doc["analysis"]["hnp"]["verdict"], true);

    let a = run(&["analyze", out.to_str().unwrap(), "--json"]);
    assert_eq!(code(&a), 0);
    let mut expected = serde_json::to_string_pretty(&doc["analysis"]).unwrap();
    expected.push('\n');
    assert_eq!(String::from_utf8(a.stdout).unwrap(), expected);
}

#[test]
fn construct_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture_config(dir.path(), "example2.json");
    let a = run(&["construct", "--config", &cfg, "--json"]);
    let b = run(&["construct", "--config", &cfg, "--json"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["data"]["R"][0], serde_json::json!([1, 5, 1, 4, 1, 5, 0, 4, 0, 1, 0, 2]));
}

#[test]
fn analyze_projection_conductor() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture_config(dir.path(), "example2.json");
    let out = dir.path().join("out.json");
    let o = run(&["construct", "--config", &cfg, "--out", out.to_str().unwrap(), "--projection", "1"]);
    assert_eq!(code(&o), 0);
    let a = run(&["analyze", out.to_str().unwrap(), "--projection", "1", "--json"]);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["projections"]["1"]["conductor_labels"], "v1 w1 v2 w2 v3 w3 w4 w5 w6");
}

#[test]
fn cyclic_job() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"field": "Q", "group": [2], "alphas": ["1"]}"#);
    let o = run(&["construct", "--config", &cfg, "--json"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["data"]["v"].as_array().unwrap().len(), 1);
    assert!(doc["data"]["w"].as_array().unwrap().is_empty());
}

#[test]
fn poly_prints_period_polynomial() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", EXAMPLE_ONE);
    let out = dir.path().join("out.json");
    assert_eq!(code(&run(&["construct", "--config", &cfg, "--out", out.to_str().unwrap()])), 0);
    let o = run(&["poly", out.to_str().unwrap(), "--projection", "1"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("X^2 + X - 10\n"));
}

#[test]
fn verify_norm_exit_codes() {
    let ok = run(&[
        "verify-norm",
        "--radicals",
        "41,137",
        "--coords",
        "4449545,-1389743/2,760267/2,-118739/2",
        "--target",
        "37/16",
    ]);
    assert_eq!(code(&ok), 0);
    let bad = run(&["verify-norm", "--radicals", "41,137", "--coords", "1,0,0,0", "--target", "37/16"]);
    assert_eq!(code(&bad), 3);
    let short = run(&["verify-norm", "--radicals", "41,137", "--coords", "1,0", "--target", "1"]);
    assert_eq!(code(&short), 3);
}

#[test]
fn replay_fixtures() {
    for name in ["example1.json", "example2.json"] {
        let o = run(&["replay-fixture", fixture(name).to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn tampered_inputs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    // a fixture whose recorded R is wrong
    let mut fx: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("example1.json")).unwrap()).unwrap();
    fx["expected"]["data"]["R"] = serde_json::json!([[1, 1], [0, 1]]);
    let path = write(dir.path(), "fx.json", &fx.to_string());
    assert_eq!(code(&run(&["replay-fixture", &path])), 3);

    // a saved construction whose R was edited
    let cfg = write(dir.path(), "c.json", EXAMPLE_ONE);
    let out = dir.path().join("out.json");
    assert_eq!(code(&run(&["construct", "--config", &cfg, "--out", out.to_str().unwrap()])), 0);
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    doc["data"]["R"] = serde_json::json!([[0, 1], [1, 0]]);
    let edited = write(dir.path(), "edited.json", &doc.to_string());
    assert_eq!(code(&run(&["analyze", &edited])), 3);
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", EXAMPLE_ONE);
    let o = run(&["construct", "--config", &cfg, "--search-bound", "100"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("search bound"));

    let bad = write(dir.path(), "bad.json", r#"{"field": "Q", "group": [2, 2], "alphas": ["37/"]}"#);
    assert_eq!(code(&run(&["construct", "--config", &bad])), 3);

    let syntax = write(dir.path(), "syntax.json", "{\"field\": \"Q\",\n \"group\": [2, 2,\n}");
    let o = run(&["construct", "--config", &syntax]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let ov = write(dir.path(), "ov.json", r#"{"v": ["(43)"]}"#);
    assert_eq!(code(&run(&["construct", "--config", &cfg, "--override-file", &ov])), 3);
}
