use std::fs;
use std::process::{Command, Output};

fn boolax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boolax")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_prints_the_verdict() {
    let o = boolax(&["check", "((e·xy)·yz)z = x"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("theorem: yes"));
    let o = boolax(&["check", "x*y = x"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("theorem: no"));
    assert!(out.contains("witness x=0 y=1"));
}

#[test]
fn parse_and_usage_errors_exit_with_one() {
    assert_eq!(boolax(&["check", "x·(y = x"]).status.code(), Some(1));
    assert_eq!(boolax(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(boolax(&["models", "x = e"]).status.code(), Some(1));
    assert_eq!(boolax(&["models", "x = e", "--size", "9"]).status.code(), Some(1));
    assert_eq!(boolax(&["batch", "/nonexistent/file"]).status.code(), Some(1));
    assert_eq!(boolax(&["--help"]).status.code(), Some(0));
}

#[test]
fn models_counts_and_tables() {
    let o = boolax(&["models", "x = e", "--size", "2", "--count"]);
    assert_eq!(stdout(&o).trim(), "0");
    let o = boolax(&["models", "((e·xy)·yz)z = x", "--size", "2", "--all", "--json"]);
    assert_eq!(stdout(&o).trim(), r#"{"n":2,"e":0,"rows":[[0,1],[1,0]]}"#);
    let o = boolax(&["models", "((e·xy)·yz)z = x", "--size", "3"]);
    assert!(stdout(&o).contains("no model of size 3"));
}

#[test]
fn enumerate_reports_counts() {
    let o = boolax(&["enumerate", "--mirror", "--swap"]);
    let out = stdout(&o);
    assert!(out.contains("mirror+swap  1890"));
    assert!(out.contains("reference count: 1323"));
    assert_eq!(out.lines().filter(|l| l.starts_with('c')).count(), 1890);
    let o = boolax(&["enumerate", "--counts-only"]);
    assert!(!stdout(&o).lines().any(|l| l.starts_with('c')));
}

#[test]
fn prove_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let axioms = dir.path().join("axioms.txt");
    let goals = dir.path().join("goals.txt");
    fs::write(&axioms, "a: (x·y)·z = x·(y·z)\nb: e·x = x\nc: x·x = e\n").unwrap();
    fs::write(&goals, "comm: x·y = y·x\n").unwrap();
    let o = boolax(&[
        "prove",
        "--axioms",
        axioms.to_str().unwrap(),
        "--goals",
        goals.to_str().unwrap(),
        "--trace",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("status: proved"));
    assert!(out.contains("replayed"));
    assert!(out.contains(" goal "));

    fs::write(&axioms, "a: x·e = x\n").unwrap();
    fs::write(&goals, "g: x·x = e\n").unwrap();
    let o = boolax(&["prove", "--axioms", axioms.to_str().unwrap(), "--goals", goals.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("status: saturated-without-proof"));
}

#[test]
fn classify_prints_json() {
    let o = boolax(&["classify", "x = e"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "trivializing");
    assert_eq!(v["parity"], false);
}

#[test]
fn fixtures_and_batch_golden() {
    let o = boolax(&["fixtures"]);
    let golden_input = include_str!("golden/fixtures.txt");
    assert_eq!(stdout(&o), golden_input);
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("fixtures.txt");
    fs::write(&file, golden_input).unwrap();
    let o = boolax(&["batch", file.to_str().unwrap(), "--json", "--workers", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out, include_str!("golden/fixtures_report.json"));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["summary"]["parity_pass"], 11);
    let tsv = boolax(&["batch", file.to_str().unwrap(), "--tsv"]);
    assert_eq!(stdout(&tsv).lines().filter(|l| l.contains("\ttrue\ttrue\t")).count(), 11);
}
