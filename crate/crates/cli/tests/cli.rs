use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_scale-hilbert"));
    c.env_remove("SCALE_HILBERT_TOL");
    c
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> (Output, Value) {
    let out = bin().args(args).output().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out, json)
}

fn f_a(report: &Value) -> Vec<f64> {
    report["fractal_weight"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["f_a"].as_f64().unwrap())
        .collect()
}

#[test]
fn diagonal_operator_weight_table() {
    let path = data("diag8.json");
    let (out, rep) = run(&["--command", "hessian-analyze", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{rep:#}");
    assert_eq!(rep["pass"], true);
    let want = [2.0, 5.0, 10.0, 17.0, 26.0, 37.0, 50.0, 65.0];
    for (g, w) in f_a(&rep).iter().zip(want) {
        assert!((g - w).abs() <= 1e-12 * w, "{g} vs {w}");
    }
}

#[test]
fn conjugation_preserves_weight() {
    let (o1, diag) = run(&["--command", "hessian-analyze", "--input", data("diag8.json").to_str().unwrap()]);
    let (o2, conj) = run(&["--command", "hessian-analyze", "--input", data("conj8.json").to_str().unwrap()]);
    assert_eq!(o1.status.code(), Some(0));
    assert_eq!(o2.status.code(), Some(0), "{conj:#}");
    for (a, b) in f_a(&diag).iter().zip(f_a(&conj)) {
        assert!((a - b).abs() <= 1e-10 * a, "{a} vs {b}");
    }
}

#[test]
fn non_symmetric_operator_halts_with_partial_report() {
    let (out, rep) = run(&["--command", "hessian-analyze", "--input", data("jordan.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(rep["pass"], false);
    assert!(rep["halted"].is_string());
    let checks = rep["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["name"], "symmetry");
    assert_eq!(checks[0]["pass"], false);
}

#[test]
fn input_errors_exit_two() {
    let (out, _) = run(&["--command", "hessian-analyze", "--input", data("bad_schema.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let (out, _) = run(&["--command", "hessian-analyze", "--input", "/nonexistent/op.json"]);
    assert_eq!(out.status.code(), Some(2));
    let (out, _) = run(&["--command", "ladder", "--ladder", "256,64"]);
    assert_eq!(out.status.code(), Some(2));
    let (out, _) = run(&["--command", "sobolev-demo", "--tol=-3"]);
    assert_eq!(out.status.code(), Some(2));
    let (out, _) = run(&["--command", "no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn env_tolerance_is_used() {
    // A tolerance below the quadrature error makes the demo fail.
    let out = bin()
        .args(["--command", "sobolev-demo", "--nu-max", "32", "--k-max", "3"])
        .env("SCALE_HILBERT_TOL", "1e-300")
        .output()
        .unwrap();
    let rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["tol"], 1e-300);
    // The flag wins over the environment.
    let out = bin()
        .args(["--command", "sobolev-demo", "--tol", "1e-8"])
        .env("SCALE_HILBERT_TOL", "1e-300")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sobolev_demo_writes_json_and_csv() {
    let dir = std::env::temp_dir().join(format!("scale-hilbert-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sobolev.json");
    let out = bin()
        .args(["--command", "sobolev-demo", "--nu-max", "16", "--k-max", "2", "--output"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = rep["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 48);
    assert!(rows.iter().all(|r| r["abs_delta"].as_f64().unwrap() < 1e-8 * r["closed_form"].as_f64().unwrap().max(1.0)));
    let csv = std::fs::read_to_string(path.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 49);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn ladder_pairs() {
    let (out, rep) = run(&["--command", "ladder"]);
    assert_eq!(out.status.code(), Some(0), "{rep:#}");
    assert_eq!(rep["rungs"].as_array().unwrap().len(), 3);
    let (out, rep) = run(&["--command", "ladder", "--pair", "weight-square", "--k-max", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(rep["envelopes"][1]["growing"], true);
    let (out, _) = run(&["--command", "ladder", "--pair", "identical", "--ladder", "4,8"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_all_below_machine_precision_fails_with_defects() {
    let (out, rep) = run(&["--command", "verify-all", "--tol", "1e-16"]);
    assert_eq!(out.status.code(), Some(1));
    let failing: Vec<&Value> = rep["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|c| c["measurements"].as_array().unwrap())
        .filter(|m| m["pass"] == false)
        .collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|m| m["value"].as_f64().unwrap() > 1e-16));
}

#[test]
fn seed_changes_keep_the_pass_pattern() {
    let pattern = |seed: &str| {
        let (out, rep) = run(&["--command", "verify-all", "--seed", seed]);
        assert_eq!(out.status.code(), Some(0), "seed {seed}: {rep:#}");
        rep["criteria"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["pass"].as_bool().unwrap())
            .collect::<Vec<_>>()
    };
    assert_eq!(pattern("0"), pattern("7"));
}
