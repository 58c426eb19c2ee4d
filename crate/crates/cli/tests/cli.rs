use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use weil_cli::io::{BasisFile, CoefficientFile, SignalFile};

fn weil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weil"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_signal(dir: &TempDir, name: &str, p: u64, seed: u64) -> std::path::PathBuf {
    let values: Vec<Value> = (0..p)
        .map(|x| {
            let t = (x + seed) as f64;
            serde_json::json!([(0.7 * t).sin(), (1.3 * t).cos()])
        })
        .collect();
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::json!({ "p": p, "values": values }).to_string()).unwrap();
    path
}

fn histogram(file: &BasisFile) -> [usize; 4] {
    let mut h = [0; 4];
    for r in &file.records {
        let i = ["+1", "+i", "-1", "-i"]
            .iter()
            .position(|l| *l == r.eigenvalue)
            .unwrap();
        h[i] += 1;
    }
    h
}

#[test]
fn eigenbasis_histograms_and_determinism() {
    let dir = TempDir::new().unwrap();
    for (p, want) in [(5u64, [2, 1, 1, 1]), (7, [2, 2, 2, 1])] {
        let a = dir.path().join(format!("a{p}.json"));
        let b = dir.path().join(format!("b{p}.json"));
        let ps = p.to_string();
        assert!(weil(&["eigenbasis", "-p", &ps, "-o", path_str(&a)]).status.success());
        assert!(weil(&["eigenbasis", "-p", &ps, "-o", path_str(&b)]).status.success());
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        let file: BasisFile = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
        assert_eq!(file.records.len() as u64, p);
        file.validate().unwrap();
        // [+1, +i, -1, -i]
        assert_eq!(histogram(&file), [want[0], want[2], want[1], want[3]]);
    }
}

#[test]
fn eigenbasis_csv() {
    let out = weil(&["eigenbasis", "-p", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("character,slot,eigenvalue,x,re,im\n"));
    assert_eq!(text.lines().count(), 1 + 25);
}

#[test]
fn invalid_prime_is_usage_error() {
    let out = weil(&["eigenbasis", "-p", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
    assert_eq!(weil(&["eigenbasis", "-p", "3"]).status.code(), Some(2));
    assert_eq!(weil(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn dot_roundtrip_nonsplit() {
    let dir = TempDir::new().unwrap();
    let input = write_signal(&dir, "s.json", 7, 0);
    let coeffs = dir.path().join("c.json");
    let back = dir.path().join("r.json");
    let s = |p: &Path| path_str(p).to_string();
    assert!(weil(&[
        "dot",
        "-p",
        "7",
        "-i",
        &s(&input),
        "--torus",
        "nonsplit",
        "-o",
        &s(&coeffs)
    ])
    .status
    .success());
    assert!(
        weil(&["dot", "-p", "7", "-i", &s(&coeffs), "--inverse", "-o", &s(&back)])
            .status
            .success()
    );
    let a: SignalFile = serde_json::from_slice(&std::fs::read(&input).unwrap()).unwrap();
    let b: SignalFile = serde_json::from_slice(&std::fs::read(&back).unwrap()).unwrap();
    for (x, y) in a.samples().unwrap().iter().zip(b.samples().unwrap()) {
        assert!((x - y).norm() < 1e-8);
    }
}

#[test]
fn dot_fast_matches_naive() {
    let dir = TempDir::new().unwrap();
    let input = write_signal(&dir, "s.json", 13, 3);
    let fast = weil(&["dot", "-p", "13", "-i", path_str(&input), "--fast"]);
    let naive = weil(&[
        "dot",
        "-p",
        "13",
        "-i",
        path_str(&input),
        "--test-vector",
        "rho-s-inv-delta1",
    ]);
    assert!(fast.status.success() && naive.status.success());
    let a: CoefficientFile = serde_json::from_slice(&fast.stdout).unwrap();
    let b: CoefficientFile = serde_json::from_slice(&naive.stdout).unwrap();
    assert_eq!(a.coefficients.len(), 12);
    for (x, y) in a.entries().iter().zip(b.entries()) {
        assert_eq!(x.0, y.0);
        assert!((x.1 - y.1).norm() < 1e-8);
    }
}

#[test]
fn dot_zero_signal() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("z.json");
    std::fs::write(&path, r#"{"p": 5, "values": [0, 0, 0, 0, 0]}"#).unwrap();
    let out = weil(&["dot", "-p", "5", "-i", path_str(&path)]);
    assert!(out.status.success());
    let c: CoefficientFile = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(c.coefficients.len(), 5);
    assert!(c.coefficients.iter().all(|r| r.value == [0.0, 0.0]));
}

#[test]
fn dot_fast_three_mod_four_is_open_problem() {
    let dir = TempDir::new().unwrap();
    let input = write_signal(&dir, "s.json", 7, 0);
    let out = weil(&["dot", "-p", "7", "-i", path_str(&input), "--fast"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported: open problem"));
}

#[test]
fn dot_rejects_wrong_length() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("s.json");
    std::fs::write(&path, r#"{"p": 5, "values": [1, 2]}"#).unwrap();
    assert_eq!(weil(&["dot", "-p", "5", "-i", path_str(&path)]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let out = weil(&["verify", "--suite", "dft-id", "-p", "5", "--pmax", "31"]);
    assert_eq!(out.status.code(), Some(0));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary[0]["suite"], "dft-id");
    assert_eq!(summary[0]["primes"].as_array().unwrap().len(), 9);

    let out = weil(&["verify", "--suite", "dims", "-p", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sigma_T space has dimension 0"));

    let out = weil(&["verify", "--suite", "all", "-p", "5", "--pmax", "13"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_reports_failure_with_counterexample() {
    // An impossible tolerance turns every residual into a violation.
    let out = weil(&["verify", "--suite", "dft-id", "-p", "5", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary[0]["pass"], false);
    assert!(summary[0]["counterexample"].as_str().unwrap().contains("p=5"));
}

#[test]
fn mult_table_json() {
    let out = weil(&["mult-table", "-p", "5", "--pmax", "17", "--format", "json"]);
    assert!(out.status.success());
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let p13 = rows.iter().find(|r| r["p"] == 13).unwrap();
    // [+1, +i, -1, -i]
    assert_eq!(p13["m"], serde_json::json!([3, 3, 4, 3]));
    assert_eq!(p13["n"], serde_json::json!([4, 3, 3, 3]));
}

#[test]
fn bench_small_and_errors() {
    let out = weil(&["bench", "-p", "13,29", "--reps", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,t_naive,t_fast,ratio"));
    assert_eq!(lines.count(), 2);
    assert_eq!(weil(&["bench", "-p", "13", "--reps", "0"]).status.code(), Some(2));
    assert_eq!(weil(&["bench", "-p", "7"]).status.code(), Some(2));
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_weil"))
        .args(["verify", "--suite", "dft-id", "-p", "5"])
        .env("WEIL_NUM_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_weil"))
        .args(["verify", "--suite", "dft-id", "-p", "5"])
        .env("WEIL_NUM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn signal_file_roundtrip_is_lossless() {
    let values: Vec<num_complex::Complex64> = (0..7)
        .map(|x| num_complex::Complex64::new(1.0 / (x as f64 + 3.0), std::f64::consts::PI * x as f64))
        .collect();
    let text = serde_json::to_string(&SignalFile::new(7, &values)).unwrap();
    let back: SignalFile = serde_json::from_str(&text).unwrap();
    assert_eq!(back.samples().unwrap(), values);
}
