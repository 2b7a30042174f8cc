use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ucl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ucl"))
        .args(args)
        .output()
        .expect("ucl runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn gen(dir: &Path, args: &[&str]) {
    let out = dir.to_str().unwrap();
    let mut all = vec!["gen", "--out", out];
    all.extend_from_slice(args);
    let o = ucl(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn cycle_cover_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), &["--family", "cycle-cover", "--n", "3", "--k", "2"]);
    let report = dir.path().join("report.json");
    let o = ucl(&[
        "check-cover",
        "--map",
        dir.path().join("map.json").to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&report)["class"], "uniform-covering");
}

#[test]
fn rotation_quotient_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), &["--family", "rotation-action", "--n", "6", "--step", "1"]);
    let o = ucl(&["check-cover", "--map", dir.path().join("map.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn example_action_classifies() {
    let dir = tempfile::tempdir().unwrap();
    gen(
        dir.path(),
        &[
            "--family",
            "free-group-truncated",
            "--gens",
            "3",
            "--len",
            "3",
            "--depth",
            "3",
        ],
    );
    let o = ucl(&[
        "classify-action",
        "--action",
        dir.path().join("action.json").to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report.is_object());
}

#[test]
fn invalid_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("space.json");
    std::fs::write(
        &bad,
        r#"{"points":["a","b"],"entourages":[{"name":"E","pairs":[[0,1]]}],"mode":"strict"}"#,
    )
    .unwrap();
    let map = dir.path().join("map.json");
    std::fs::write(&map, r#"{"source":"space.json","target":"space.json","values":[0,1]}"#).unwrap();
    let o = ucl(&["check-cover", "--map", map.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    let o = ucl(&[
        "check-cover",
        "--map",
        dir.path().join("missing.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empty_spec_list_passes() {
    let dir = tempfile::tempdir().unwrap();
    let specs = dir.path().join("specs.json");
    std::fs::write(&specs, "[]").unwrap();
    let report = dir.path().join("report.json");
    let o = ucl(&[
        "verify",
        "--specs",
        specs.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&report)["instance_count"], 0);
}

#[test]
fn verify_counts_add_up() {
    let o = ucl(&["verify", "--suite", "covering", "--count", "40", "--seed", "3"]);
    assert!(matches!(o.status.code(), Some(0 | 1)));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    for (name, c) in report["propositions"].as_object().unwrap() {
        let sum = c["pass"].as_u64().unwrap() + c["fail"].as_u64().unwrap() + c["skipped"].as_u64().unwrap();
        assert_eq!(sum, 40, "{name}");
    }
}

#[test]
fn sequential_and_parallel_reports_match() {
    let a = ucl(&["verify", "--count", "30", "--seed", "11"]);
    let b = ucl(&["verify", "--count", "30", "--seed", "11", "--sequential"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn dyadic_tower_pi1() {
    let dir = tempfile::tempdir().unwrap();
    gen(
        dir.path(),
        &["--family", "solenoid-tower", "--base", "3", "--levels", "3"],
    );
    let o = ucl(&["pi1", "--tower", dir.path().join("tower.json").to_str().unwrap()]);
    assert!(o.status.success());
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["description"], "Z ←×2— Z ←×2— Z");
}

#[test]
fn h1_of_hexagon() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), &["--family", "cycle-net", "--n", "6"]);
    let o = ucl(&["h1", "--space", dir.path().join("space.json").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("\"Z\""));
}

#[test]
fn quotient_and_structures_run() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), &["--family", "antipodal-action", "--n", "6"]);
    let action = dir.path().join("action.json");
    let qdir = dir.path().join("q");
    let o = ucl(&[
        "quotient",
        "--action",
        action.to_str().unwrap(),
        "--out",
        qdir.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = ucl(&["check-cover", "--map", qdir.join("projection.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = ucl(&["structures", "--action", action.to_str().unwrap()]);
    assert!(o.status.success());
}

#[test]
fn rips_and_gp_run() {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), &["--family", "cycle-net", "--n", "5", "--radii", "2,1"]);
    let space = dir.path().join("space.json");
    let out = dir.path().join("complex.json");
    let o = ucl(&[
        "rips",
        "--space",
        space.to_str().unwrap(),
        "--scale",
        "d<=2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.exists());
    let o = ucl(&["gp", "--space", space.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}
