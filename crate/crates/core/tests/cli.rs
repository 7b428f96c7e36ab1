//! The `pressurelab` binary end to end.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn pressurelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pressurelab"))
        .args(args)
        .env("PRESSURELAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json_stdout(args: &[&str]) -> Value {
    let out = pressurelab(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models")
}

#[test]
fn spectrum_csv_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spec.csv");
    let status = pressurelab(&["spectrum", "--model", "rw_0.5_0.5", "--grid", "201", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "alpha,delta_root,delta_newton,delta_legendre,q_alpha,slope,discrepancy"
    );
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 203);
    let zero = rows.iter().find(|r| r[0].parse::<f64>().unwrap().abs() < 1e-12).unwrap();
    assert!((zero[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn gap_record() {
    let v = json_stdout(&["gap", "--model", "rw_0.3_0.7"]);
    assert!((v["delta"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let delta0 = 4f64.ln() / ((1.0 / 0.3f64).ln() + (1.0 / 0.7f64).ln());
    assert!((v["delta0"].as_f64().unwrap() - delta0).abs() < 1e-9);
    assert!((v["delta0"].as_f64().unwrap() - 0.888_281_396).abs() < 1e-8);
    assert!((v["gap"].as_f64().unwrap() - 0.111_718_604).abs() < 1e-8);
    assert!((v["drift"].as_f64().unwrap() - 0.4).abs() < 1e-12);
}

#[test]
fn zeta_four_words() {
    let v = json_stdout(&["zeta", "--model", "rw_0.5_0.5", "--alpha", "0", "--K", "0.5", "--n", "2", "--s", "1"]);
    assert_eq!(v["zeta"].as_f64().unwrap(), 0.5);
}

#[test]
fn gap_sweep_columns() {
    let out = pressurelab(&["gap-sweep", "--cmin", "0.25", "--cmax", "0.75", "--steps", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "c,delta0,delta,gap,error");
    let mid: Vec<f64> = lines[2].trim_end_matches(',').split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(mid[0], 0.5);
    assert!((mid[1] - 1.0).abs() < 1e-12 && (mid[2] - 1.0).abs() < 1e-12);
    assert!(mid[3].abs() < 1e-10);
}

#[test]
fn model_files_are_accepted() {
    let path = models_dir().join("rw_0.4_0.6.json");
    let v = json_stdout(&["pressure", "--model", path.to_str().unwrap(), "--s", "1", "--q", "0.3"]);
    let want = (0.4 * (-0.3f64).exp() + 0.6 * 0.3f64.exp()).ln();
    assert!((v["pressure"].as_f64().unwrap() - want).abs() < 1e-14);
    let deep = models_dir().join("cantor_gapped.json");
    let v = json_stdout(&["pressure", "--model", deep.to_str().unwrap(), "--s", "0"]);
    assert!((v["pressure"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-10);
    assert_eq!(v["method"], "SpectralDepthK");
}

#[test]
fn seeded_simulation_is_byte_identical() {
    let args = [
        "simulate", "--model", "rw_0.4_0.6", "--measure", "bernoulli(0.4,0.6)", "--n", "500", "--count", "300",
        "--seed", "9", "--alpha", "0.2", "--K", "5",
    ];
    let a = pressurelab(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_pressurelab"))
        .args(args)
        .env("PRESSURELAB_THREADS", "1")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    for key in ["seed", "n", "count", "measure", "drift_hat", "drift_se", "recur_frac", "unif_frac"] {
        assert!(!v[key].is_null(), "missing {key}");
    }
    assert_eq!(v["measure"], "bernoulli(0.4,0.6)");
}

#[test]
fn errors_are_json_records_with_exit_codes() {
    let out = pressurelab(&["gap", "--model", "rw_0.7_0.7"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    let record: Value = serde_json::from_str(stderr.lines().last().unwrap()).unwrap();
    assert_eq!(record["error"]["module"], "symbolic");
    assert_eq!(record["error"]["operation"], "gap");
    assert_eq!(record["error"]["case"], "RangeError");

    // a numerical failure: the corridor of an enormous horizon exceeds the width cap
    let out = pressurelab(&["zeta", "--model", "asym_0.5_-1000000_1000000", "--alpha", "0", "--K", "1e9", "--n", "100", "--s", "1"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let record: Value = serde_json::from_str(String::from_utf8(out.stderr).unwrap().lines().last().unwrap()).unwrap();
    assert_eq!(record["error"]["case"], "WidthError");
}

#[test]
fn failures_leave_no_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.json");
    let status = pressurelab(&["gap", "--model", "no_such_model", "--out", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(2));
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn bad_thread_setting_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_pressurelab"))
        .args(["gap"])
        .env("PRESSURELAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn svg_is_written_next_to_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("curve.svg");
    let out = pressurelab(&["spectrum", "--model", "multi_1/3_1_2", "--grid", "21", "--svg", svg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("<polyline"));
}

#[test]
fn quick_verify_passes() {
    let out = pressurelab(&["verify", "--quick"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(out.status.success(), "{text}");
}
