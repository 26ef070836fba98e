use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn geogate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geogate")).args(args).output().expect("binary runs")
}

fn report(dir: &std::path::Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

#[test]
fn single_berry_pi8_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = geogate(&["single-berry", "--gate", "pi8", "--slowness", "1e-3", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path(), "single-berry.json");
    assert_eq!(r["pass"], true);
    assert!(r["outputs"]["gate_error"].as_f64().unwrap() <= 1e-3);
    assert_eq!(r["inputs"]["slowness"], 1e-3);
    assert!(r["tool_version"].is_string());
}

#[test]
fn two_berry_is_factorizable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = geogate(&["two-berry", "--kappa-alpha", "1", "--kappa-beta", "2", "--J", "0.5", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(dir.path(), "two-berry.json")["outputs"]["factorizable"], true);
}

#[test]
fn hybrid_cnot_reaches_cz() {
    let dir = tempfile::tempdir().unwrap();
    let o = geogate(&["hybrid-cnot", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path(), "hybrid-cnot.json");
    assert!(r["outputs"]["distance_to_cz"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn reruns_are_bitwise_identical() {
    let runs: Vec<Value> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            geogate(&["two-aa", "--out", dir.path().to_str().unwrap()]);
            report(dir.path(), "two-aa.json")
        })
        .collect();
    assert_eq!(runs[0]["outputs"], runs[1]["outputs"]);
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = geogate(&["single-berry", "--slowness", "0.1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(dir.path(), "single-berry.json")["pass"], false);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(geogate(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(geogate(&["single-berry", "--gate", "t"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let o = geogate(&["single-aa", "--b1", "-1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn sweep_writes_points_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    fs::write(
        &cfg,
        "experiment = \"single-berry\"\n[base]\ngate = \"pi8\"\n[axis]\nname = \"slowness\"\nvalues = [0.1, 0.01, 0.001]\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = geogate(&["sweep", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    // the coarsest point misses the 1e-3 gate threshold
    assert_eq!(o.status.code(), Some(1));
    let mut rdr = csv::Reader::from_path(out.join("sweep.csv")).unwrap();
    let errors: Vec<f64> = rdr.records().map(|r| r.unwrap()[5].parse().unwrap()).collect();
    assert_eq!(errors.len(), 3);
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    assert!(out.join("single-berry_point002.json").exists());
}

#[test]
fn empty_sweep_axis_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    fs::write(&cfg, "experiment = \"two-aa\"\n[axis]\nname = \"J\"\nvalues = []\n").unwrap();
    let o = geogate(&["sweep", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("axis"));
}
