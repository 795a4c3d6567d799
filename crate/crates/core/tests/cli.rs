use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_projtverberg")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const SQUARE: &str = r#"{"d": 2, "points": [[1,1],[-1,1],[1,-1],[-1,-1]], "V": "infinity", "W": [[0,0,1]], "r": 2}"#;

#[test]
fn verify_then_recheck() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "square.json", SQUARE);
    let out_path = dir.path().join("report.json");
    let out = run(&["verify", "--theorem", "cpt", "--input", input.to_str().unwrap(), "--output", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(&out_path);
    assert_eq!(rep["verdict"], "pass");
    assert_eq!(rep["claims"][0]["min_count"], 2);
    assert_eq!(rep["input_digest"].as_str().unwrap().len(), 64);

    let again = run(&["recheck", "--input", out_path.to_str().unwrap()]);
    assert_eq!(code(&again), 0);

    let mut tampered = rep.clone();
    tampered["claims"][0]["min_count"] = 3.into();
    let bad = write(dir.path(), "tampered.json", &tampered.to_string());
    assert_eq!(code(&run(&["recheck", "--input", bad.to_str().unwrap()])), 1);
}

#[test]
fn failing_verdict_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "off.json", &SQUARE.replace("[[0,0,1]]", "[[5,5,1]]"));
    let out = run(&["verify", "--theorem", "cpt", "--input", input.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["frobnicate"])), 2);
    let no_d = write(dir.path(), "no_d.json", r#"{"points": [[0, 0]]}"#);
    assert_eq!(code(&run(&["verify", "--theorem", "cpt", "--input", no_d.to_str().unwrap()])), 2);
    let bad = write(dir.path(), "bad.json", r#"{"d": 2, "points": [[0, "x"]]}"#);
    let out = run(&["search", "--theorem", "cpt", "--input", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("points[0][1]"));
    let missing = dir.path().join("absent.json");
    assert_eq!(code(&run(&["search", "--theorem", "cpt", "--input", missing.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["recheck"])), 2);
}

#[test]
fn flag_gate() {
    assert_eq!(code(&run(&["certify", "--theorem", "flag", "--d", "2", "--v", "1", "--w", "1", "--m", "2"])), 0);
    assert_eq!(code(&run(&["certify", "--theorem", "flag", "--d", "1", "--v", "0", "--w", "0", "--m", "2"])), 1);
}

#[test]
fn tverberg_search_with_plot() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "five.json", r#"{"d": 2, "points": [[0,0],[4,0],[0,4],[1,1],[3,3]], "V": "infinity", "r": 2}"#);
    let out_path = dir.path().join("tv.json");
    let svg = dir.path().join("tv.svg");
    let out = run(&[
        "search",
        "--theorem",
        "tver",
        "--input",
        input.to_str().unwrap(),
        "--output",
        out_path.to_str().unwrap(),
        "--plot",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(&out_path);
    assert!(!rep["warnings"].as_array().unwrap().is_empty());
    assert!(rep["claims"][0]["configs"][0]["partition"].is_array());
    assert!(std::fs::read_to_string(svg).unwrap().starts_with("<svg"));
    assert_eq!(code(&run(&["recheck", "--input", out_path.to_str().unwrap()])), 0);
}

#[test]
fn demo_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = run(&["demo-measure", "--d", "2", "--v", "1", "--samples", "30", "--seed", "4", "--output", p.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (ra, rb) = (report(&a), report(&b));
    assert_eq!(ra["demo"], rb["demo"]);
    assert_eq!(ra["claims"], rb["claims"]);
    assert!(ra["demo"]["label"].as_str().unwrap().contains("not a certificate"));
}
