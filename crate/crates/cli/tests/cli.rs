use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tsyb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsyb")).args(args).env("SOURCE_DATE_EPOCH", "0").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn count_prints_the_bound() {
    let o = tsyb(&["count", "--d", "2", "--s0", "2", "--L0", "1", "--c", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "10816");
}

#[test]
fn missing_config_exits_one() {
    let o = tsyb(&["rates", "--config", "missing.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.json"));
}

#[test]
fn unknown_subcommand_exits_64() {
    assert_eq!(tsyb(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(tsyb(&["count", "--bogus"]).status.code(), Some(64));
}

fn sample_file(dir: &Path) -> String {
    let dist = dir.join("dist.json");
    let o = tsyb(&["gen-dist", "--kappa", "2", "--out", dir.to_str().unwrap()]);
    assert!(o.status.success());
    let o = tsyb(&[
        "sample",
        "--config",
        dist.to_str().unwrap(),
        "--n",
        "16",
        "--seed",
        "5",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    dir.join("sample.csv").to_str().unwrap().to_string()
}

#[test]
fn oversize_exact_budget_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let data = sample_file(dir.path());
    let o = tsyb(&["erm", "--data", &data, "--mode", "exact", "--L0", "3", "--s0", "6", "--c", "4", "--limit", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("count bound"));
}

#[test]
fn erm_report_is_json_and_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let data = sample_file(dir.path());
    let args = ["erm", "--data", data.as_str(), "--mode", "exact", "--L0", "1", "--s0", "2", "--c", "1"];
    let a = tsyb(&args);
    let b = tsyb(&args);
    assert!(a.status.success());
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["mode"], "exact");
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn every_run_writes_one_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = tsyb(&["count", "--d", "2", "--s0", "2", "--L0", "1", "--c", "1", "--out", out]);
    assert!(o.status.success());
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("count.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["subcommand"], "count");
    assert_eq!(m["timestamp"], 0);
    assert_eq!(m["config_digest"].as_str().unwrap().len(), 64);
    assert_eq!(fs::read_to_string(dir.path().join("count.txt")).unwrap(), "10816\n");
}

#[test]
fn lower_bound_csv_independent_of_workers() {
    let run = |w: &str| {
        let o = tsyb(&["lower-bound", "--workers", w, "--quad-res", "32"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        o.stdout
    };
    let one = run("1");
    assert!(String::from_utf8_lossy(&one).starts_with("n,K,affinity,le_cam"));
    assert_eq!(one, run("4"));
}
