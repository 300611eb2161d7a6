use std::process::{Command, Output};

use serde_json::Value;

fn dioph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dioph")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn minima_example() {
    let v = json(&dioph(&["minima", "--n", "1", "--xi", "0/1", "--X", "1,1"]));
    assert_eq!(v["lambdas"], serde_json::json!(["1/1", "1/1"]));
    assert_eq!(v["exhaustive"], Value::Bool(true));
}

#[test]
fn module_generation_all_true() {
    let v = json(&dioph(&["module-gen-check", "--kmax", "3", "--lmax", "3"]));
    assert_eq!(v["all_generate"], Value::Bool(true));
    assert_eq!(v["reports"].as_array().unwrap().len(), 12);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(dioph(&["minima", "--bogus", "1"]).status.code(), Some(1));
    assert_eq!(dioph(&[]).status.code(), Some(1));
    let bad = dioph(&["minima", "--n", "1", "--xi", "x/2", "--X", "1,1"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("--xi"));
    let short = dioph(&["minima", "--n", "2", "--xi", "0", "--X", "1,1"]);
    assert!(String::from_utf8_lossy(&short.stderr).contains("--X"));
    assert_eq!(dioph(&["prop101", "--p", "-1,0,1", "--t", "2"]).status.code(), Some(1));
    assert_eq!(dioph(&["liouville", "--n", "2", "--t", "2", "--kappa", "5/2", "--hmax", "5"]).status.code(), Some(1));
    assert_eq!(dioph(&["--help"]).status.code(), Some(0));
}

#[test]
fn deterministic_output() {
    let args = ["approximate", "--n", "4", "--t", "1", "--xi", "alg:-2,0,0,1:1:2", "--schedule", "10,30"];
    let a = dioph(&args);
    let b = dioph(&[&args[..], &["--jobs", "1"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("X\tY\tdelta"));
    assert!(lines[3].starts_with("# {"));
    let g1 = dioph(&["gelfond-check", "--xi", "1/3", "--samples", "20", "--seed", "5"]);
    let g2 = dioph(&["gelfond-check", "--xi", "1/3", "--samples", "20", "--seed", "5"]);
    assert_eq!(g1.stdout, g2.stdout);
    assert_eq!(json(&g1)["violations"], Value::from(0));
}

#[test]
fn config_round_trip() {
    let dir = std::env::temp_dir().join(format!("dioph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    let args = ["duality", "--n", "1", "--xi", "1/2", "--X", "1,2", "--format", "tsv"];
    let printed = dioph(&[&args[..], &["--print-config"]].concat());
    std::fs::write(&cfg, &printed.stdout).unwrap();
    let direct = dioph(&args);
    let replay = dioph(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(direct.status.code(), Some(0));
    assert_eq!(direct.stdout, replay.stdout);
    let out = dir.join("out.tsv");
    assert_eq!(dioph(&[&args[..], &["--output", out.to_str().unwrap()]].concat()).status.code(), Some(0));
    assert_eq!(std::fs::read(&out).unwrap(), direct.stdout);
}

#[test]
fn discriminant_and_series() {
    let v = json(&dioph(&["prop101", "--p", "-2,0,1", "--xi", "0", "--t", "2"]));
    assert_eq!(v["constant"], Value::from("48/1"));
    assert_eq!(v["check"]["verdict"], Value::from("holds"));
    let sw = json(&dioph(&["prop101", "--dmax", "2", "--hmax", "4", "--xis", "0,1/2"]));
    assert_eq!(sw["violations"], Value::from(0));
    let out = dioph(&["liouville", "--n", "1", "--t", "1", "--kappa", "5", "--hmax", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 10);
}

#[test]
fn precision_cap_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_dioph"))
        .args(["heights", "--poly", "-2,0,1"])
        .env("DIOPH_PRECISION_CAP", "64")
        .output()
        .unwrap();
    assert_eq!(json(&out)["value"], Value::from("2/1"));
    assert_eq!(dioph(&["--precision-cap", "8", "heights", "--poly", "1"]).status.code(), Some(1));
}
