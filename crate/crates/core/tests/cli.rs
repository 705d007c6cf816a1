//! End-to-end checks of the command-line interface: artifacts, determinism,
//! exit codes.

use std::path::{Path, PathBuf};
use std::process::Command;

use striph::quad::TWO_PI;
use striph::report;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_striph")
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("striph-it-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin())
        .args(args)
        .env("STRIPH_THREADS", "2")
        .output()
        .expect("spawn striph");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn read_csv_columns(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(|s| s.to_string()).collect();
    let rows: Vec<Vec<f64>> = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn solve_writes_field_whose_bottom_row_is_the_datum() {
    let dir = tmp_dir("solve");
    let out = dir.to_str().unwrap();
    let (code, stdout, stderr) = run(&[
        "solve", "--f", "xsinx", "--weight", "one", "--p", "2", "--N", "16", "--lambda",
        "calibrated", "--grid", "65x65x4", "--out", out,
    ]);
    assert_eq!(code, 0, "stdout: {stdout}\nstderr: {stderr}");
    assert!(stdout.contains("calibration: lambda=0.5"), "{stdout}");
    assert!(stdout.contains("calibration: lambda=1"), "{stdout}");

    let (header, rows) = read_csv_columns(&dir.join("field.csv"));
    assert_eq!(header, ["x", "y", "u", "ux", "uy", "uxx", "uyy"]);
    assert_eq!(rows.len(), 65 * 65);
    for row in rows.iter().filter(|r| r[1] == 0.0) {
        let (x, u) = (row[0], row[2]);
        assert!((u - x * x.sin()).abs() < 1e-9, "u({x}, 0) = {u}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn identical_configs_give_byte_identical_artifacts() {
    let dir_a = tmp_dir("det-a");
    let dir_b = tmp_dir("det-b");
    for dir in [&dir_a, &dir_b] {
        let (code, _, stderr) = run(&[
            "solve", "--f", "sinx", "--N", "24", "--lambda", "1.0", "--grid", "17x9x2", "--out",
            dir.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{stderr}");
    }
    for name in ["solution.json", "field.csv"] {
        let a = std::fs::read(dir_a.join(name)).unwrap();
        let b = std::fs::read(dir_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    std::fs::remove_dir_all(&dir_a).unwrap();
    std::fs::remove_dir_all(&dir_b).unwrap();
}

#[test]
fn reloaded_solution_reproduces_the_field_csv() {
    let dir = tmp_dir("roundtrip");
    let (code, _, stderr) = run(&[
        "solve", "--f", "poly", "--N", "12", "--lambda", "1.0", "--grid", "9x7x2", "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stderr}");
    let sol = report::solution_from_json(&std::fs::read_to_string(dir.join("solution.json")).unwrap())
        .unwrap();
    let (_, rows) = read_csv_columns(&dir.join("field.csv"));
    for row in &rows {
        let (x, y) = (row[0], row[1]);
        assert!((sol.eval_u(x, y) - row[2]).abs() <= 1e-12);
        assert!((sol.eval_ux(x, y) - row[3]).abs() <= 1e-12);
        assert!((sol.eval_uyy(x, y) - row[6]).abs() <= 1e-12);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn basis_command_emits_gram_and_passes_its_gate() {
    let dir = tmp_dir("basis");
    let (code, stdout, _) = run(&["basis", "--N", "8", "--out", dir.to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
    let (_, rows) = read_csv_columns_raw(&dir.join("gram.csv"));
    assert_eq!(rows.len(), 17);
    assert_eq!(rows[0].len(), 17);
    std::fs::remove_dir_all(&dir).unwrap();
}

fn read_csv_columns_raw(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (vec![], rows)
}

#[test]
fn divergent_weight_exits_with_numerical_failure() {
    let dir = tmp_dir("weight-bad");
    let (code, _, stderr) = run(&[
        "weight", "--weight", "power:alpha=-2", "--p", "2", "--resolution", "32", "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 3, "stderr: {stderr}");
    assert!(stderr.contains("diverges"), "{stderr}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn admissible_weight_writes_report() {
    let dir = tmp_dir("weight-ok");
    let (code, stdout, stderr) = run(&[
        "weight", "--weight", "power:alpha=0.5", "--p", "2", "--resolution", "64", "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "stdout: {stdout}\nstderr: {stderr}");
    let doc = std::fs::read_to_string(dir.join("weight.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
    assert_eq!(v["in_ap"], serde_json::Value::Bool(true));
    assert!(v["ap_constant"].as_f64().unwrap() > 1.0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tmp_dir("config");
    let out = dir.to_str().unwrap();
    let (code, _, _) = run(&["solve", "--f", "nope", "--out", out]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["solve", "--grid", "bad", "--out", out]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["solve", "--p", "0.5", "--out", out]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["weight", "--weight", "shifted:c=0.2", "--out", out]);
    assert_eq!(code, 2);
    // clap itself rejects unknown flags with exit 2
    let (code, _, _) = run(&["solve", "--wat", "1"]);
    assert_eq!(code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_passes_on_a_preset() {
    let dir = tmp_dir("verify");
    let (code, stdout, stderr) = run(&[
        "verify", "--f", "xsinx", "--N", "16", "--lambda", "calibrated", "--grid", "33x33x2",
        "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "stdout: {stdout}\nstderr: {stderr}");
    let doc = std::fs::read_to_string(dir.join("report.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
    assert!(v["laplacian_max"].as_f64().unwrap() <= 1e-8);
    assert_eq!(v["lambda"].as_f64().unwrap(), 1.0);
    assert_eq!(v["weak_residuals"].as_array().unwrap().len(), 16);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn yh_command_writes_the_ratio_table() {
    let dir = tmp_dir("yh");
    let (code, _, stderr) = run(&["yh", "--N", "32", "--out", dir.to_str().unwrap()]);
    assert_eq!(code, 0, "{stderr}");
    let text = std::fs::read_to_string(dir.join("yh.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "f,p,lhs,rhs,ratio");
    assert!(lines.count() >= 18, "three exponents per corpus member");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sampled_csv_datum_solves() {
    let dir = tmp_dir("csvf");
    let csv = dir.join("datum.csv");
    let mut doc = String::from("x,value\n");
    for i in 0..=800 {
        let x = i as f64 * TWO_PI / 800.0;
        doc.push_str(&format!("{},{}\n", report::fmt_f64(x), report::fmt_f64(x.sin())));
    }
    std::fs::write(&csv, doc).unwrap();
    let (code, _, stderr) = run(&[
        "solve", "--f", csv.to_str().unwrap(), "--N", "8", "--lambda", "1.0", "--grid", "9x5x1",
        "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stderr}");
    std::fs::remove_dir_all(&dir).unwrap();
}
