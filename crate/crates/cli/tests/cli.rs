use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn hysharp(args: &[&str], envs: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hysharp"));
    cmd.args(args).env_remove("HYSHARP_OUT");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn reports(dir: &Path) -> Vec<Value> {
    let text = std::fs::read_to_string(dir.join("report.json")).unwrap();
    serde_json::from_str::<Value>(&text).unwrap().as_array().unwrap().clone()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = hysharp(&["run", "--suite", "bogus"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_suite_and_bad_parameters_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = path(dir.path());
    assert_eq!(hysharp(&["run", "--out", o], &[]).status.code(), Some(2));
    assert_eq!(hysharp(&["run", "--suite", "constants", "--p", "2.5", "--out", o], &[]).status.code(), Some(2));
    assert_eq!(hysharp(&["run", "--suite", "sharpness", "--eps", "0.1,0.07,0.02", "--out", o], &[]).status.code(), Some(2));
    assert_eq!(hysharp(&["run", "--suite", "hybrid", "--d", "2", "--out", o], &[]).status.code(), Some(2));
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn spectrum_writes_table_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = hysharp(&["run", "--suite", "spectrum", "--p", "1.5", "--grid-n", "512", "--out", path(dir.path())], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("spectrum_p1.5000_d1.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("k,lambda_computed,lambda_predicted,rel_err"));
    assert_eq!(lines.count(), 6);
    let r = reports(dir.path());
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["anchor"], "second-variation/hermite-spectrum");
    assert!(dir.path().join("meta.json").exists());
}

#[test]
fn sharpness_reports_extrapolation_against_b() {
    let dir = tempfile::tempdir().unwrap();
    let out = hysharp(
        &["run", "--suite", "sharpness", "--p", "1.5", "--eps", "0.1,0.05,0.025", "--rho", "0.4", "--out", path(dir.path())],
        &[],
    );
    let r = reports(dir.path());
    let pass = r[0]["pass"].as_bool().unwrap();
    assert_eq!(out.status.code(), Some(if pass { 0 } else { 1 }));
    assert!(r[0]["computed"]["extrapolated"].is_number());
    assert!((r[0]["reference"]["b_constant"].as_f64().unwrap() - 0.119148).abs() < 1e-5);
    let fit = std::fs::read_to_string(dir.path().join("sharpness_fit.csv")).unwrap();
    assert!(fit.starts_with("p,rho,limit,order,converged,b_constant,rel_err"));
}

#[test]
fn all_is_byte_identical_for_a_seed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    hysharp(&["run", "--suite", "all", "--seed", "42", "--out", path(a.path())], &[]);
    hysharp(&["run", "--suite", "all", "--seed", "42", "--jobs", "4", "--out", path(b.path())], &[]);
    let ra = std::fs::read(a.path().join("report.json")).unwrap();
    let rb = std::fs::read(b.path().join("report.json")).unwrap();
    assert!(!ra.is_empty());
    assert_eq!(ra, rb);
    for r in reports(a.path()) {
        assert!(!r["anchor"].as_str().unwrap().is_empty());
    }
}

#[test]
fn config_file_with_flag_override_and_env_output() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.cfg");
    std::fs::write(&config, "[suite]\nname = pointwise\n[params]\np = 1.2, 1.8\neta = 0.1\nsamples = 2000\nseed = 3\n").unwrap();
    let env_out = dir.path().join("from-env");
    let out = hysharp(&["run", "--config", path(&config), "--p", "1.5"], &[("HYSHARP_OUT", &env_out)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = reports(&env_out);
    assert_eq!(r.len(), 2);
    for rep in &r {
        assert_eq!(rep["params"]["p"], 1.5);
        assert_eq!(rep["params"]["samples"], 2000);
    }

    let flag_out = dir.path().join("from-flag");
    let out = hysharp(&["run", "--config", path(&config), "--out", path(&flag_out)], &[("HYSHARP_OUT", &env_out)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(reports(&flag_out).len(), 4);
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.cfg");
    std::fs::write(&config, "[suite]\nname = constants\n[params]\nwidth = 3\n").unwrap();
    let out = hysharp(&["run", "--config", path(&config), "--out", path(dir.path())], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("width"));
}
