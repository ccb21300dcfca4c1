use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_fairaudit");

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    assert_eq!(text.trim_end().lines().count(), 1, "stderr: {text}");
    serde_json::from_str(text.trim()).expect("stderr is JSON")
}

fn audit_table1(out: &Path) -> Output {
    run(&[
        "audit",
        data("table1.csv").to_str().unwrap(),
        "--target",
        "salary",
        "--sensitive",
        "ethnicity",
        "--features",
        "education",
        "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn audit_table1_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let res = audit_table1(&out);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let f = |v: &Value| v.as_f64().unwrap();
    assert!((f(&r["omitted_model"]["coefficients"][0]) - 128.0).abs() < 0.01);
    assert!((f(&r["full_model"]["sensitive_coefficient"]) + 500.0).abs() < 1e-6);
    assert!((f(&r["bias"]["delta"][0]) - 28.0).abs() < 0.01);
    assert!((f(&r["sanitized_models"]["population_mean"]["intercept"]) - 750.0).abs() < 1e-6);
    assert!(r["sanitized_models"]["reference_correct"]["sensitive_coefficient"].is_null());
    assert_eq!(r["policy"], "population_mean");
    assert!(r["seed"].is_null());
    assert_eq!(r["fairness"]["omitted"]["group_error_profile"]["reference"]["count"], 5);
}

#[test]
fn audit_missing_column_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let res = run(&[
        "audit",
        data("table1.csv").to_str().unwrap(),
        "--target",
        "salary",
        "--sensitive",
        "gender",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2));
    assert_eq!(stderr_json(&res)["error"], "MissingColumn");
    assert!(!out.exists());
}

#[test]
fn audit_unbiased_data_has_no_delta() {
    let dir = tempfile::tempdir().unwrap();
    let spec_path = dir.path().join("spec.json");
    let spec = r#"{
        "true_intercept": 10, "true_coefficients": [2, -1], "true_beta": 0, "noise_std": 0,
        "n_reference": 40, "n_protected": 40,
        "feature_distributions": {
            "reference": [{"normal": {"mean": 5, "std": 1}}, {"uniform": {"lo": 0, "hi": 3}}],
            "protected": [{"normal": {"mean": 3, "std": 1}}, {"uniform": {"lo": 1, "hi": 4}}]
        },
        "pathologies": ["label_bias"], "seed": 9
    }"#;
    std::fs::write(&spec_path, spec).unwrap();
    let csv = dir.path().join("data.csv");
    let res = run(&[
        "simulate",
        "--spec",
        spec_path.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let out = dir.path().join("report.json");
    let res = run(&[
        "audit",
        csv.to_str().unwrap(),
        "--target",
        "y",
        "--sensitive",
        "s",
        "--out",
        out.to_str().unwrap(),
        "--seed",
        "9",
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["seed"], 9);
    for j in 0..2 {
        assert!(r["bias"]["delta"][j].as_f64().unwrap().abs() < 1e-9);
        let full = r["full_model"]["coefficients"][j].as_f64().unwrap();
        let omitted = r["omitted_model"]["coefficients"][j].as_f64().unwrap();
        assert!((full - omitted).abs() < 1e-9);
    }
}

#[test]
fn audit_rank_deficient_is_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    std::fs::write(&csv, "a,b,s,y\n1,1,0,1\n2,2,1,3\n3,3,0,2\n4,4,1,5\n").unwrap();
    let out = dir.path().join("r.json");
    let res = run(&[
        "audit",
        csv.to_str().unwrap(),
        "--target",
        "y",
        "--sensitive",
        "s",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(1));
    assert_eq!(stderr_json(&res)["error"], "RankDeficient");
    assert!(!out.exists());
}

#[test]
fn simulate_matches_fixture_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let res = run(&[
            "simulate",
            "--spec",
            data("table1_spec.json").to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(res.status.success());
    }
    let fixture = std::fs::read(data("table1.csv")).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), fixture);
    assert_eq!(std::fs::read(&b).unwrap(), fixture);
}

#[test]
fn simulate_seed_override_changes_noise() {
    let dir = tempfile::tempdir().unwrap();
    let spec = data("salary_noisy_spec.json");
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(run(&[
        "simulate",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        a.to_str().unwrap()
    ])
    .status
    .success());
    assert!(run(&[
        "simulate",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        b.to_str().unwrap(),
        "--seed",
        "7"
    ])
    .status
    .success());
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn simulate_invalid_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec_text = std::fs::read_to_string(data("table1_spec.json"))
        .unwrap()
        .replace("\"noise_std\": 0", "\"noise_std\": -1");
    let spec = dir.path().join("bad.json");
    std::fs::write(&spec, spec_text).unwrap();
    let out = dir.path().join("out.csv");
    let res = run(&[
        "simulate",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(1));
    assert_eq!(stderr_json(&res)["error"], "InvalidSpec");
    assert!(!out.exists());
}

fn sweep(lambdas: &str, out: &Path) -> Output {
    run(&[
        "sweep",
        data("table1.csv").to_str().unwrap(),
        "--target",
        "salary",
        "--sensitive",
        "ethnicity",
        "--lambdas",
        lambdas,
        "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn sweep_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let json_out = dir.path().join("points.json");
    assert!(sweep("0,1,100", &json_out).status.success());
    let points: Value = serde_json::from_str(&std::fs::read_to_string(&json_out).unwrap()).unwrap();
    let points = points.as_array().unwrap();
    assert_eq!(points.len(), 3);
    let gaps: Vec<f64> = points.iter().map(|p| p["group_gap"].as_f64().unwrap().abs()).collect();
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2]);
    assert!(points[0]["model"]["coefficients"].is_array());

    let csv_out = dir.path().join("points.csv");
    assert!(sweep("0,1,100", &csv_out).status.success());
    let text = std::fs::read_to_string(&csv_out).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("lambda,mse,group_gap,intercept,education\n"));
}

#[test]
fn sweep_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("points.json");
    let res = sweep("", &out);
    assert_eq!(res.status.code(), Some(2));
    let res = sweep("0,100,1", &out);
    assert_eq!(res.status.code(), Some(2));
    let err = stderr_json(&res);
    assert_eq!(err["message"], "lambdas must ascend");
    assert!(!out.exists());
}

#[test]
fn usage_errors_are_json() {
    let res = run(&["audit", "x.csv", "--target", "y"]);
    assert_eq!(res.status.code(), Some(2));
    assert_eq!(stderr_json(&res)["error"], "UsageError");
    let res = run(&[
        "audit",
        "x.csv",
        "--target",
        "y",
        "--sensitive",
        "s",
        "--out",
        "o.json",
        "--policy",
        "fair",
    ]);
    assert_eq!(res.status.code(), Some(2));
    assert!(run(&["--help"]).status.success());
}

#[test]
fn missing_input_file_is_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let res = run(&[
        "audit",
        "/nonexistent/data.csv",
        "--target",
        "y",
        "--sensitive",
        "s",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(1));
    assert_eq!(stderr_json(&res)["error"], "Io");
}
