use std::fs;
use std::path::Path;
use std::process::Command;

use affine_dkdv::cli::{run, Cli};
use affine_dkdv::tau::solve_partner;
use clap::Parser;
use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_affine-dkdv");

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn exec(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().unwrap()
}

#[test]
fn every_subcommand_writes_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["evolve", "soliton", "verify", "speed-scan", "commute-check", "carrier-free-check"] {
        let out = dir.path().join(cmd);
        let cli = Cli::try_parse_from(["affine-dkdv", cmd, "--out", out.to_str().unwrap()]).unwrap();
        let summary = run(&cli).unwrap();
        assert!(summary.passed, "{cmd}: {}", summary.report);
        let manifest = read_json(&out.join("manifest.json"));
        assert_eq!(manifest["command"], cmd);
        for f in manifest["outputs"].as_array().unwrap() {
            assert!(out.join(f.as_str().unwrap()).exists(), "{cmd}: missing {f}");
        }
    }
}

#[test]
fn manifest_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    let out = exec(&["evolve", "--seed", "7", "--out", first.to_str().unwrap()]);
    assert!(out.status.success());
    let manifest = first.join("manifest.json");
    let out = exec(&["evolve", "--config", manifest.to_str().unwrap(), "--seed", "7", "--out", second.to_str().unwrap()]);
    assert!(out.status.success());
    for f in ["states.csv", "fh.csv", "diagnostics.csv"] {
        assert_eq!(fs::read(first.join(f)).unwrap(), fs::read(second.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn seed_changes_the_random_window() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(exec(&["evolve", "--seed", "1", "--out", a.to_str().unwrap()]).status.success());
    assert!(exec(&["evolve", "--seed", "2", "--out", b.to_str().unwrap()]).status.success());
    assert_ne!(fs::read(a.join("states.csv")).unwrap(), fs::read(b.join("states.csv")).unwrap());
}

#[test]
fn verify_rejects_a_perturbed_partner() {
    let dir = tempfile::tempdir().unwrap();
    let c = solve_partner(&[1.0, 3.0, 4.0], 3.2).unwrap();
    let config = dir.path().join("bad.json");
    let body = json!({
        "verify": { "suites": ["bhz"], "components": [{ "A": 1, "b": 3.2, "c": c + 1e-3 }] }
    });
    fs::write(&config, body.to_string()).unwrap();
    let out = dir.path().join("bad");
    let status = exec(&["verify", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(1));
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["passed"], false);

    let good = dir.path().join("good.json");
    let body = json!({
        "verify": { "suites": ["bhz"], "components": [{ "A": 1, "b": 3.2, "c": c }] }
    });
    fs::write(&good, body.to_string()).unwrap();
    let out = dir.path().join("good");
    let status = exec(&["verify", "--config", good.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0));
}

#[test]
fn exact_verify_passes_with_symmetric_weights() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exact.json");
    let body = json!({
        "n": 4,
        "u": [0, 1, 2],
        "v": [1, 2, 3],
        "alpha": [2, 1, -1, -2],
        "verify": {
            "suites": ["bhz", "det-vs-sum", "swap-symmetry"],
            "samples": 20,
            "components": [{ "A": 1, "b": "1/2" }, { "A": "2/3", "b": "1/3" }]
        }
    });
    fs::write(&config, body.to_string()).unwrap();
    let out = dir.path().join("exact");
    let res = exec(&["verify", "--mode", "exact", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stdout));
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    fs::write(&config, r#"{ "no_such_field": 1 }"#).unwrap();
    let out = dir.path().join("o");
    let res = exec(&["evolve", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));

    fs::write(&config, r#"{ "u": [1, 1] }"#).unwrap();
    let res = exec(&["evolve", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn unknown_mode_is_a_usage_error() {
    assert!(Cli::try_parse_from(["affine-dkdv", "evolve", "--mode", "fast"]).is_err());
    assert!(Cli::try_parse_from(["affine-dkdv", "frobnicate"]).is_err());
}

#[test]
fn speed_scan_summary_separates_modes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan");
    assert!(exec(&["speed-scan", "--out", out.to_str().unwrap()]).status.success());
    let summary = read_json(&out.join("summary.json"));
    assert_eq!(summary["all_positive"], true);
    assert_eq!(summary["modes_separated"], true);
    assert_eq!(summary["dots_negative_for_b_above_c"], true);
    assert_eq!(summary["modes"].as_array().unwrap().len(), 2);
}

#[test]
fn carrier_free_check_agrees_on_both_instances() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("free");
    assert!(exec(&["carrier-free-check", "--out", out.to_str().unwrap()]).status.success());
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["condition"], true);

    let config = dir.path().join("bound.json");
    fs::write(&config, r#"{ "u": [1, 2], "v": [1, 0] }"#).unwrap();
    let out = dir.path().join("bound");
    let res = exec(&["carrier-free-check", "--mode", "exact", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stdout));
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["condition"], false);
    assert_eq!(report["agree"], true);
}
