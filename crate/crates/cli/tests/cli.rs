use std::path::Path;
use std::process::{Command, Output};

fn dpf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpf")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_writes_results() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("res");
    let o = dpf(&[
        "--problem", "DPF1,DPF3", "--m", "3", "--d", "2", "--algo", "NSGA2,MOEAD", "--pop", "15", "--gens", "2",
        "--runs", "2", "--ref-size", "50", "--out", path(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("problem\talgorithm\truns"));
    assert_eq!(text.lines().filter(|l| l.starts_with("DPF")).count(), 4);
    assert_eq!(text.matches('*').count(), 2);
    for f in ["summary.csv", "metadata.json", "fronts/DPF3_m3_d2.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn front_exports_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    let o = dpf(&["front", "--problem", "DPF5", "--m", "3", "--d", "2", "--count", "10", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("segments:"));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 11);
    assert_eq!(text.lines().next(), Some("f1,f2,f3"));
}

#[test]
fn verify_exit_codes() {
    let ok = dpf(&["verify", "--problem", "DPF3", "--m", "6", "--d", "3", "--samples", "2000", "--pareto-samples", "300"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));

    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("demo.json");
    let bad = dpf(&[
        "verify", "--problem", "DEMO_IMPLICIT", "--m", "3", "--d", "2", "--samples", "20000", "--pareto-samples",
        "0", "--report", path(&report),
    ]);
    assert_eq!(bad.status.code(), Some(3));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["passed"], false);
    assert!(json["violation_count"].as_u64().unwrap() > 0);
}

#[test]
fn bad_configuration_exits_with_one() {
    let o = dpf(&["front", "--problem", "DPF1", "--m", "3", "--d", "3", "--out", "unused.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    let o = dpf(&["verify", "--problem", "DPF5", "--m", "3", "--d", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(dpf(&["--m", "3", "--d", "2"]).status.code(), Some(2));
    assert_eq!(dpf(&["--problem", "DPF9", "--m", "3", "--d", "2"]).status.code(), Some(2));
    assert_eq!(dpf(&["front", "--problem", "DPF1"]).status.code(), Some(2));
}
