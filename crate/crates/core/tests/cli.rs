use std::path::Path;
use std::process::{Command, Output};

use orbit_geodesics::io::{read_json, DiagonalDocument, OperatorDocument};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_orbit-geodesics"));
    c.env_remove("ORBIT_GEODESICS_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_writes_operator_documents() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["--n", "8", "--out", path(dir.path()), "build"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["z_dg.json", "z_o.json", "z2.json"] {
        let doc: OperatorDocument = read_json(&dir.path().join(name)).unwrap();
        assert_eq!(doc.dim, 8);
        assert_eq!(doc.entries.len(), 64);
        assert!(doc.constraint_ok);
        doc.to_anti_hermitian().unwrap();
    }
    let b: DiagonalDocument = read_json(&dir.path().join("b.json")).unwrap();
    let values = b.to_diagonal().unwrap().values();
    assert_eq!(values[0], 1.0);
    assert_eq!(values[3], 0.25);
    let d0: DiagonalDocument = read_json(&dir.path().join("d0.json")).unwrap();
    assert_eq!(d0.entries.len(), 8);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["--suite", "nope", "verify"]).status.code(), Some(2));
    assert_eq!(run(&["--n", "1", "build"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--gamma", "1.5", "qnorm"]).status.code(), Some(2));
}

#[test]
fn config_file_and_flags_layer() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.ini");
    std::fs::write(&cfg, "n = 10\nsuite = certify\nseed = 3\n").unwrap();
    let out_dir = dir.path().join("o");
    let out = bin()
        .env("ORBIT_GEODESICS_CONFIG", &cfg)
        .args(["--n", "12", "--out", path(&out_dir), "--json", "verify"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["config"]["n"], 12);
    assert_eq!(report["config"]["seed"], 3);
    assert_eq!(report["checks"].as_array().unwrap().len(), 1);
    assert_eq!(report["checks"][0]["check"], "certify");
    assert_eq!(report["verdict"], "pass");
    assert!(out_dir.join("report.json").exists());
}

#[test]
fn verify_orders_checks_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "--n",
        "8",
        "--suite",
        "thm59,bch,certify",
        "--out",
        path(dir.path()),
        "verify",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = read_json(&dir.path().join("report.json")).unwrap();
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["bch", "certify", "thm59"]);
}

#[test]
fn curve_emits_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["--n", "8", "--out", path(dir.path()), "curve", "--samples", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert!(csv.starts_with("t,cumulative_length,speed,"));
    assert_eq!(rows.len(), 3);
    for r in &rows {
        // length equals t |Z2| on the whole window
        assert!((r[1] - r[3]).abs() <= 1e-6 * r[3].max(1.0));
        assert!((r[4] - 2.0 * r[2]).abs() <= 1e-6);
        assert_eq!(r[6], 1.0);
    }
}

#[test]
fn qnorm_and_probe_print_json() {
    let out = run(&["--n", "8", "--json", "qnorm", "--operator", "z2"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let (value, norm) = (doc["value"].as_f64().unwrap(), doc["norm"].as_f64().unwrap());
    assert!((value - norm).abs() < 1e-6);

    let out = run(&["--json", "probe", "--dim", "6", "--trials", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["dim"], 6);
    assert_eq!(doc["runs"].as_array().unwrap().len(), 2);
}

#[test]
fn qnorm_reads_operator_files() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(&["--n", "6", "--out", path(dir.path()), "build"]).status.success());
    let file = dir.path().join("z_o.json");
    let out = run(&["--json", "qnorm", "--file", path(&file)]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["dim"], 6);
    assert!(doc["value"].as_f64().unwrap() > 0.0);
}
