//! End-to-end tests of the `univdec` binary: exit-code contract, report
//! files, manifest completeness and rational-mode determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_univdec")
}

const CONFIG: &str = r#"{
    "blocklength": 2,
    "alphabets": {"x": 2, "y": 2},
    "prior": {"kind": "iid", "marginal": ["1/2", "1/2"]},
    "channel": {"kind": "bsc", "delta": "0.1"},
    "family": {"kind": "bsc_grid", "deltas": ["0.05", "0.1", "0.2"]},
    "rate": 0.5,
    "trials": 400
}"#;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("cfg.json"), CONFIG).unwrap();
    dir
}

#[test]
fn subcommands_produce_reports_and_manifest() {
    let dir = setup();
    for sub in ["pairwise", "gmet", "redundancy", "simulate", "demo-fsc"] {
        let out = run(&[sub, "--config", "cfg.json", "--out", "out"], dir.path());
        assert!(
            out.status.success(),
            "{sub}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/manifest.json")).unwrap())
            .unwrap();
    let outputs: Vec<String> = manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    for name in &outputs {
        assert!(dir.path().join("out").join(name).exists(), "missing {name}");
    }
    // n=2 binary: 4x4 pairs per metric, 3 metrics + header
    let pairwise = std::fs::read_to_string(dir.path().join("out/pairwise.csv")).unwrap();
    assert_eq!(pairwise.lines().count(), 1 + 3 * 16);
}

#[test]
fn verify_suites_pass_and_negative_control_fails() {
    let dir = setup();
    for suite in ["lemma1", "theorem1", "ratefn", "merged", "tightness"] {
        let out = run(
            &["verify", "--suite", suite, "--config", "cfg.json", "--out", "out"],
            dir.path(),
        );
        assert!(out.status.success(), "suite {suite} failed");
    }
    let out = run(
        &[
            "verify",
            "--suite",
            "theorem1",
            "--corrupt-oracle",
            "--config",
            "cfg.json",
            "--out",
            "out",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_errors_exit_2() {
    let dir = setup();
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"blocklength": 2, "alphabets": {"x": 2, "y": 2},
            "prior": {"kind": "iid", "marginal": ["0.4", "0.5"]}}"#,
    )
    .unwrap();
    let out = run(&["pairwise", "--config", "bad.json", "--out", "out"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("prior.marginal"));

    let out = run(&["pairwise", "--config", "missing.json", "--out", "out"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rational_mode_outputs_are_byte_deterministic() {
    let dir = setup();
    for out_dir in ["a", "b"] {
        let out = run(
            &["redundancy", "--config", "cfg.json", "--out", out_dir],
            dir.path(),
        );
        assert!(out.status.success());
    }
    for name in ["redundancy.csv", "redundancy.json"] {
        assert_eq!(
            std::fs::read(dir.path().join("a").join(name)).unwrap(),
            std::fs::read(dir.path().join("b").join(name)).unwrap(),
            "{name} differs between runs"
        );
    }
}

#[test]
fn mc_mode_emits_ci_columns() {
    let dir = setup();
    let out = run(
        &[
            "simulate", "--config", "cfg.json", "--mode", "mc", "--seed", "7", "--out", "mc",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("mc/simulate.csv")).unwrap();
    let row = csv.lines().nth(1).unwrap();
    let cells: Vec<&str> = row.split(',').collect();
    assert!(!cells[4].is_empty(), "P_e_mc empty: {row}");
    assert!(!cells[5].is_empty(), "ci empty: {row}");
}

#[test]
fn plotdata_series_from_reports() {
    let dir = setup();
    assert!(run(
        &["simulate", "--config", "cfg.json", "--out", "out"],
        dir.path()
    )
    .status
    .success());
    assert!(run(
        &["redundancy", "--config", "cfg.json", "--out", "out"],
        dir.path()
    )
    .status
    .success());
    let out = run(
        &["plotdata", "out/simulate.csv", "out/redundancy.csv", "--out", "plots"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in [
        "slack_vs_n.csv",
        "slack_vs_n.svg",
        "log2pe_vs_rate.csv",
        "log2pe_vs_rate.svg",
    ] {
        assert!(dir.path().join("plots").join(name).exists(), "missing {name}");
    }
    let svg = std::fs::read_to_string(dir.path().join("plots/log2pe_vs_rate.svg")).unwrap();
    assert!(svg.contains("<polyline"));

    // empty input set is a config error
    let out = run(&["plotdata", "--out", "plots"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
