use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lse_cond_cli::run::{CondReport, ExperimentReport, SolveReport};

fn lse_cond(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lse-cond"))
        .args(args)
        .env_remove("LSE_COND_SEED")
        .output()
        .expect("spawn lse-cond")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn generate(dir: &Path, eta: &str, delta: &str) -> Vec<String> {
    let d = dir.to_str().unwrap();
    stdout(&lse_cond(&["generate", "--eta", eta, "--delta", delta, "--out", d]));
    ["a", "c", "b", "d"]
        .iter()
        .zip(["A.mtx", "C.mtx", "b.mtx", "d.mtx"])
        .flat_map(|(flag, file)| [format!("--{flag}"), format!("{d}/{file}")])
        .collect()
}

fn with<'a>(head: &[&'a str], files: &'a [String], tail: &[&'a str]) -> Vec<&'a str> {
    let mut v = head.to_vec();
    v.extend(files.iter().map(String::as_str));
    v.extend(tail);
    v
}

#[test]
fn generate_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let files = generate(dir.path(), "1e-3", "1e-3");
    let text = stdout(&lse_cond(&with(&["solve"], &files, &[])));
    assert!(text.lines().any(|l| l.trim() == "1000"), "{text}");

    let json = stdout(&lse_cond(&with(&["solve"], &files, &["--format", "json"])));
    let report: SolveReport = serde_json::from_str(&json).unwrap();
    assert_eq!((report.m, report.n, report.p), (9, 4, 2));
    for (xi, want) in report.x.iter().zip([1.0, 1.0, 1.0, 1000.0]) {
        assert!((xi - want).abs() <= 1e-9 * want);
    }
    assert!(report.constraint_residual <= 1e-12);
}

#[test]
fn cond_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let files = generate(dir.path(), "1e-3", "1e-3");
    let json = stdout(&lse_cond(&with(&["cond"], &files, &["--format", "json"])));
    let report: CondReport = serde_json::from_str(&json).unwrap();
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", json);
    assert!((report.exact.kappa_inf_rel - 2.0).abs() < 1e-9);
    assert!((report.exact.kappa_c - 2.0).abs() < 1e-9);
    assert!((report.exact.kappa_2_bound - 4.0).abs() < 1e-9);
    assert_eq!(report.k, 4);
}

#[test]
fn experiment_reproduces_reference_row() {
    let json = stdout(&lse_cond(&[
        "experiment", "--eta", "1e-3", "--delta", "1e-3", "--L", "identity", "--trials", "5",
        "--format", "json",
    ]));
    let report: ExperimentReport = serde_json::from_str(&json).unwrap();
    assert_eq!(report.rows.len(), 1);
    let row = &report.rows[0];
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b;
    assert!(close(row.kappa_inf_rel, 2.0));
    assert!(close(row.kappa_c, 2.0));
    assert!(close(row.kappa_inf_upper, 2.002));
    assert!(close(row.kappa_c_upper, 4.0));
    assert_eq!(row.per_trial.len(), 5);
}

#[test]
fn same_seed_same_bytes() {
    let args = ["experiment", "--trials", "7", "--seed", "42", "--format", "csv"];
    let first = stdout(&lse_cond(&args));
    assert_eq!(first, stdout(&lse_cond(&args)));

    let via_env = Command::new(env!("CARGO_BIN_EXE_lse-cond"))
        .args(["experiment", "--trials", "7", "--format", "csv"])
        .env("LSE_COND_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(first, stdout(&via_env));

    let other = stdout(&lse_cond(&["experiment", "--trials", "7", "--seed", "43", "--format", "csv"]));
    assert_ne!(first, other);
    assert_eq!(first.lines().count(), 13);

    let json = ["experiment", "--trials", "3", "--seed", "9", "--format", "json"];
    assert_eq!(stdout(&lse_cond(&json)), stdout(&lse_cond(&json)));
}

#[test]
fn rank_deficient_constraints_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let files = generate(dir.path(), "1e-3", "1e-3");
    let c = dir.path().join("C.mtx");
    fs::write(&c, "%%MatrixMarket matrix array real general\n2 4\n1\n2\n0\n0\n0\n0\n0\n0\n").unwrap();
    let out = lse_cond(&with(&["solve"], &files, &[]));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("rank(C) = p"), "{err}");
}

#[test]
fn malformed_input_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let files = generate(dir.path(), "1e-3", "1e-3");
    let a = dir.path().join("A.mtx");
    fs::write(&a, "%%MatrixMarket matrix array complex general\n1 1\n1 0\n").unwrap();
    let out = lse_cond(&with(&["cond"], &files, &[]));
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("A.mtx") && err.contains("line 1"), "{err}");

    let missing = lse_cond(&["solve", "--a", "/nonexistent/A.mtx", "--c", "x", "--b", "y", "--d", "z"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn selections_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let files = generate(dir.path(), "1e-3", "1e-3");
    let l = dir.path().join("L.mtx");
    fs::write(&l, "%%MatrixMarket matrix coordinate real general\n1 4 1\n1 4 1\n").unwrap();
    let from_file: CondReport = serde_json::from_str(&stdout(&lse_cond(&with(
        &["cond"],
        &files,
        &["--L", l.to_str().unwrap(), "--format", "json"],
    ))))
    .unwrap();
    let from_rows: CondReport =
        serde_json::from_str(&stdout(&lse_cond(&with(&["cond"], &files, &["--L", "4", "--format", "json"]))))
            .unwrap();
    assert_eq!(from_file.exact, from_rows.exact);
    assert_eq!(from_rows.k, 1);

    let out = lse_cond(&with(&["cond"], &files, &["--L", "0,5"]));
    assert_eq!(out.status.code(), Some(1));
    let out = lse_cond(&with(&["cond"], &files, &["--alpha", "1,1,0,1"]));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(lse_cond(&["experiment", "--b2", "e3"]).status.code(), Some(1));
    assert_eq!(lse_cond(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(lse_cond(&["--help"]).status.code(), Some(0));
}

#[test]
fn estimate_lists_all_terms() {
    let dir = tempfile::tempdir().unwrap();
    let files = generate(dir.path(), "1e-3", "1e-3");
    let csv = stdout(&lse_cond(&with(&["estimate"], &files, &["--format", "csv"])));
    assert_eq!(csv.lines().count(), 1 + 2 * 7);
    assert!(csv.lines().any(|l| l.starts_with("kappa_c_upper,total,4e0")), "{csv}");
}
