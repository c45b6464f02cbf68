use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn ncrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncrank")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SINGLE: &str = r#"{"format": 1, "s": 1, "vars": ["x1"], "A0": [["0"]], "A": {"x1": [["1"]]}}"#;

const COMMUTATOR: &str = r#"{"format": 1, "vars": ["x1", "x2"], "layers": [
  [[{"coeffs": {"x1": "1"}}, {"coeffs": {"x2": "1"}}]],
  [[{"coeffs": {"x2": "1"}}], [{"coeffs": {"x1": "-1"}}]]
]}"#;

const TELESCOPING: &str = r#"{"format": 1, "vars": ["x1", "x2"], "layers": [
  [[{"coeffs": {"x1": "1"}}, {"coeffs": {"x1": "1"}}]],
  [[{"const": "1", "coeffs": {"x2": "1"}}], [{"const": "-1", "coeffs": {"x2": "-1"}}]]
]}"#;

#[test]
fn rank_of_a_single_variable() {
    let dir = TempDir::new().unwrap();
    let p = put(&dir, "t.json", SINGLE);
    let o = ncrank(&["rank", s(&p)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "ncrank = 1\n");
}

#[test]
fn skew_pencil_round_trips_through_verify() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("skew.json");
    assert!(ncrank(&["gen", "skew", "--s", "3", "--out", s(&p)]).status.success());
    let w = dir.path().join("w.json");
    let c = dir.path().join("c.json");
    let o = ncrank(&["rank", s(&p), "--trace", "--witness-out", s(&w), "--cert-out", s(&c)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.ends_with("ncrank = 3\n"), "{out}");
    assert!(out.lines().next().unwrap().starts_with("round 1: r=0 d=1"));

    let v = ncrank(&["verify", s(&p), s(&w), "--cert", s(&c)]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).starts_with("OK 3 "));
}

#[test]
fn tampered_witness_fails() {
    let dir = TempDir::new().unwrap();
    let p = put(&dir, "t.json", SINGLE);
    let w = dir.path().join("w.json");
    assert!(ncrank(&["rank", s(&p), "--witness-out", s(&w)]).status.success());
    let text = fs::read_to_string(&w).unwrap();
    let tampered = put(&dir, "bad.json", &text.replacen("\"y\"", "\"0\"", 1));
    assert_ne!(text, fs::read_to_string(&tampered).unwrap());
    let v = ncrank(&["verify", s(&p), s(&tampered)]);
    assert_eq!(v.status.code(), Some(1));
    assert_eq!(stdout(&v), "FAIL\n");
}

#[test]
fn variable_mismatch_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let p = put(&dir, "t.json", SINGLE);
    let w = dir.path().join("w.json");
    assert!(ncrank(&["rank", s(&p), "--witness-out", s(&w)]).status.success());
    let two = put(
        &dir,
        "two.json",
        r#"{"format": 1, "s": 1, "vars": ["x1", "x2"], "A0": [["0"]], "A": {"x1": [["1"]], "x2": [["1"]]}}"#,
    );
    assert_eq!(ncrank(&["verify", s(&two), s(&w)]).status.code(), Some(2));
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let p = put(&dir, "t.json", "{\"s\": 2");
    assert_eq!(ncrank(&["rank", s(&p)]).status.code(), Some(2));
    let q = put(&dir, "q.json", r#"{"format": 7, "s": 1, "vars": [], "A0": [["1"]], "A": {}}"#);
    assert_eq!(ncrank(&["rank", s(&q)]).status.code(), Some(2));
    assert_eq!(ncrank(&["rank", "/nonexistent/pencil.json"]).status.code(), Some(2));
    assert_eq!(ncrank(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn pit_on_the_commutator() {
    let dir = TempDir::new().unwrap();
    let f = put(&dir, "f.json", COMMUTATOR);
    let o = ncrank(&["pit", s(&f), "--monomial"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "NONZERO\nx1 x2\n");
}

#[test]
fn pit_on_a_telescoping_sum() {
    let dir = TempDir::new().unwrap();
    let f = put(&dir, "f.json", TELESCOPING);
    let o = ncrank(&["pit", s(&f), "--monomial"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "ZERO\n");
}

#[test]
fn pit_witness_tuple_is_checked() {
    let dir = TempDir::new().unwrap();
    let f = put(&dir, "f.json", COMMUTATOR);
    let o = ncrank(&["pit", s(&f), "--witness-dim", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("x1 =\n  0 1 0\n  0 0 0\n  0 0 0\n"), "{out}");
    assert!(out.ends_with("check: evaluation is nonzero\n"));
    assert_eq!(ncrank(&["pit", s(&f), "--witness-dim", "2"]).status.code(), Some(2));
}

#[test]
fn gen_is_deterministic() {
    let a = ncrank(&["gen", "random", "--s", "2", "--n", "2", "--seed", "7"]);
    let b = ncrank(&["gen", "random", "--s", "2", "--n", "2", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = ncrank(&["gen", "random", "--s", "2", "--n", "2", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn gen_records_known_ranks() {
    let o = stdout(&ncrank(&["gen", "bipartite", "--n", "3", "--edges", "cycle"]));
    assert!(o.contains("\"expected_rank\": 3"), "{o}");
    let o = stdout(&ncrank(&["gen", "bipartite", "--s", "3", "--edges", "1-1,1-2,1-3"]));
    assert!(o.contains("\"expected_rank\": 1"), "{o}");
    let o = stdout(&ncrank(&["gen", "factorized", "--s", "3", "--r", "1"]));
    assert!(o.contains("\"rank_at_most\": 1"), "{o}");
    assert_eq!(ncrank(&["gen", "bipartite", "--edges", "cycle"]).status.code(), Some(2));
    assert_eq!(ncrank(&["gen", "bipartite", "--s", "2", "--edges", "0-1"]).status.code(), Some(2));
}

#[test]
fn jobs_do_not_change_output() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("t.json");
    assert!(ncrank(&["gen", "random", "--s", "3", "--n", "2", "--seed", "3", "--out", s(&p)]).status.success());
    let w1 = dir.path().join("w1.json");
    let w4 = dir.path().join("w4.json");
    let a = ncrank(&["rank", s(&p), "--jobs", "1", "--witness-out", s(&w1)]);
    let b = ncrank(&["rank", s(&p), "--jobs", "4", "--witness-out", s(&w4)]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(fs::read(&w1).unwrap(), fs::read(&w4).unwrap());
}

#[test]
fn wide_automata_give_the_same_rank() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("skew.json");
    assert!(ncrank(&["gen", "skew", "--s", "3", "--out", s(&p)]).status.success());
    for flags in [&[][..], &["--wide-dprime"][..], &["--no-shrink"][..]] {
        let mut args = vec!["rank", s(&p)];
        args.extend_from_slice(flags);
        assert_eq!(stdout(&ncrank(&args)), "ncrank = 3\n");
    }
}
