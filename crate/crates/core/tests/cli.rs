use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;
use widecat::cli::{run, EXIT_INPUT, EXIT_OK};

struct Run {
    code: i32,
    out: String,
    err: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.out).unwrap_or_else(|e| panic!("{e}: {}", self.out))
    }
}

fn widecat(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("widecat").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, v.to_string()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn snf_of_diagonal() {
    let dir = TempDir::new().unwrap();
    let m = file(&dir, "m.json", &json!([[2, 0], [0, 3]]));
    let r = widecat(&["snf", "--matrix", s(&m)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let v = r.json();
    assert_eq!(v["D"], json!([[1, 0], [0, 6]]));
    assert_eq!(v["diagonal"], json!([1, 6]));
    assert!(v["U"].is_array() && v["V"].is_array());
}

#[test]
fn module_split_by_crt() {
    let dir = TempDir::new().unwrap();
    let m = file(&dir, "zmod12.json", &json!({"generators": 1, "relations": [[12]]}));
    let r = widecat(&["module", "split", "--in", s(&m)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(
        r.json()["pieces"],
        json!([
            {"component": [2], "group": {"rank": 0, "invariant_factors": [4]}},
            {"component": [3], "group": {"rank": 0, "invariant_factors": [3]}},
        ])
    );
}

#[test]
fn module_canon_support_and_k0() {
    let dir = TempDir::new().unwrap();
    let m = file(&dir, "m.json", &json!({"generators": 3, "relations": [[2, 0, 0], [0, 6, 0]]}));
    let canon = widecat(&["module", "canon", "--in", s(&m)]).json();
    assert_eq!(canon["group"], json!({"rank": 1, "invariant_factors": [2, 6]}));
    assert_eq!(widecat(&["module", "support", "--in", s(&m)]).json()["support"], json!("full"));
    assert_eq!(
        widecat(&["module", "k0", "--in", s(&m)]).json()["class"],
        json!({"support": "full", "coords": 1})
    );
    let t = file(&dir, "t.json", &json!({"generators": 1, "relations": [[12]]}));
    let k0 = widecat(&["module", "k0", "--in", s(&t), "--support", "2,3,5"]).json();
    assert_eq!(k0["class"], json!({"support": [2, 3, 5], "coords": [2, 1, 0]}));
}

#[test]
fn complex_commands() {
    let dir = TempDir::new().unwrap();
    let c = file(&dir, "c.json", &json!({"bottom_degree": 0, "ranks": [1, 1], "differentials": [[[3]]]}));
    let h = widecat(&["complex", "homology", "--in", s(&c)]).json();
    assert_eq!(h["homology"], json!({"0": {"rank": 0, "invariant_factors": [3]}}));
    assert_eq!(widecat(&["complex", "support", "--in", s(&c)]).json()["support"], json!([3]));
    assert_eq!(
        widecat(&["complex", "k0", "--in", s(&c), "--support", "2,3"]).json()["class"],
        json!({"support": [2, 3], "coords": [0, 1]})
    );
    let above = widecat(&["complex", "truncate", "--in", s(&c), "--at", "1"]).json();
    assert_eq!(above["ranks"], json!([]));
    let below = widecat(&["complex", "truncate", "--in", s(&c), "--at", "-1", "--mode", "below"]).json();
    assert_eq!(below["ranks"], json!([]));
    let r = widecat(&["complex", "truncate", "--in", s(&c)]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("--at"), "{}", r.err);
}

#[test]
fn spec_commands() {
    let dir = TempDir::new().unwrap();
    let p = file(&dir, "p.json", &json!({"points": ["a", "b", "c"], "covers": [["a", "b"], ["a", "c"]]}));
    let d = widecat(&["spec", "decompose", "--in", s(&p), "--support", "b,c"]).json();
    assert_eq!(d["parts"], json!([["b"], ["c"]]));
    assert_eq!(widecat(&["spec", "decompose", "--in", s(&p)]).json()["parts"], json!([["a", "b", "c"]]));
    assert_eq!(widecat(&["spec", "islocal", "--in", s(&p)]).json()["local"], json!(false));
    assert_eq!(widecat(&["spec", "enumerate", "--in", s(&p)]).json()["count"], json!(5));
    let z = widecat(&["spec", "decompose", "--zspec", "--support", "2,3"]).json();
    assert_eq!(z["parts"], json!([[2], [3]]));
    assert_eq!(widecat(&["spec", "decompose", "--zspec", "--support", "full"]).json()["parts"], json!(["full"]));
    assert_eq!(widecat(&["spec", "enumerate", "--zspec"]).code, EXIT_INPUT);
}

#[test]
fn input_errors_name_the_file_and_location() {
    let dir = TempDir::new().unwrap();
    let r = widecat(&["snf", "--matrix", "/nonexistent/m.json"]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("/nonexistent/m.json"), "{}", r.err);

    let bad = file(&dir, "bad.json", &json!({"generators": 2, "relations": [[1, "x"]]}));
    let r = widecat(&["module", "canon", "--in", s(&bad)]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("bad.json") && r.err.contains("relations[0][1]"), "{}", r.err);

    let ragged = file(&dir, "ragged.json", &json!([[1, 2], [3]]));
    assert_eq!(widecat(&["snf", "--matrix", s(&ragged)]).code, EXIT_INPUT);

    let not_json = dir.path().join("x.json");
    fs::write(&not_json, "{").unwrap();
    let r = widecat(&["snf", "--matrix", not_json.to_str().unwrap()]);
    assert!(r.code == EXIT_INPUT && r.err.contains("malformed JSON"), "{}", r.err);

    let z12 = file(&dir, "z12.json", &json!({"generators": 1, "relations": [[12]]}));
    let r = widecat(&["module", "split", "--in", s(&z12), "--support", "2"]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("domain error"), "{}", r.err);
    assert_eq!(widecat(&["module", "k0", "--in", s(&z12), "--support", "4"]).code, EXIT_INPUT);

    let cyc = file(&dir, "cyc.json", &json!({"points": ["a", "b"], "covers": [["a", "b"], ["b", "a"]]}));
    assert_eq!(widecat(&["spec", "islocal", "--in", s(&cyc)]).code, EXIT_INPUT);

    let d2 = file(&dir, "d2.json", &json!({"bottom_degree": 0, "ranks": [1, 1, 1], "differentials": [[[1]], [[1]]]}));
    assert_eq!(widecat(&["complex", "homology", "--in", s(&d2)]).code, EXIT_INPUT);
}

#[test]
fn usage_errors() {
    assert_eq!(widecat(&[]).code, EXIT_INPUT);
    assert_eq!(widecat(&["module", "frobnicate", "--in", "x"]).code, EXIT_INPUT);
    assert_eq!(widecat(&["verify", "--suite", "nope", "--trials", "1"]).code, EXIT_INPUT);
    assert_eq!(widecat(&["--help"]).code, EXIT_OK);
}

#[test]
fn every_suite_is_runnable() {
    for suite in widecat::verify::SUITES {
        let r = widecat(&["verify", "--suite", suite, "--trials", "5", "--seed", "3"]);
        assert_eq!(r.code, EXIT_OK, "{suite}: {}", r.out);
        let v = r.json();
        assert_eq!(v["suite"], json!(suite));
        assert_eq!(v["failures"], json!(0));
        assert_eq!(v["seed"], json!(3));
    }
}

#[test]
fn verify_report_file_matches_stdout() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.json");
    let r = widecat(&["verify", "--suite", "ks", "--trials", "10", "--seed", "42", "--report", s(&path)]);
    assert_eq!(r.code, EXIT_OK);
    let written: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written, r.json());
    assert_eq!(written["trials"], json!(10));
}

#[test]
fn binary_runs_verify_all() {
    let out = Command::new(env!("CARGO_BIN_EXE_widecat"))
        .args(["verify", "--suite", "all", "--trials", "200", "--seed", "42"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn primary_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let m = file(&dir, "m.json", &json!([[4, 6, 8], [10, 12, 14], [1, 0, 3]]));
    let a = widecat(&["snf", "--matrix", s(&m)]).out;
    let b = widecat(&["snf", "--matrix", s(&m)]).out;
    assert_eq!(a, b);
}
