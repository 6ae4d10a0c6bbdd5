//! End-to-end runs of the `clc` binary.

mod common;

use std::process::{Command, Output};

use serde_json::{json, Value};

fn clc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clc"))
        .args(args)
        .output()
        .expect("clc runs")
}

fn fixture(name: &str) -> String {
    common::fixture_path(name).to_string_lossy().into_owned()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn analyze_worked_examples() {
    let theta = json_of(&clc(&["analyze", &fixture("theta.json")]));
    assert_eq!(
        [&theta["q"], &theta["m_bc"], &theta["p"], &theta["c"], &theta["bound_T4"]],
        [&json!(2), &json!(3), &json!("4"), &json!(2), &json!("4")]
    );
    let tree = json_of(&clc(&["analyze", &fixture("tree.json")]));
    assert_eq!((tree["q"].as_u64(), tree["m_bc"].as_u64()), (Some(0), Some(0)));
    assert_eq!((tree["p"].as_str(), tree["bound_T4"].as_str()), (Some("0"), Some("1")));
    let db = json_of(&clc(&["analyze", &fixture("dumbbell.json")]));
    assert_eq!((db["q"].as_u64(), db["m_bc"].as_u64()), (Some(2), Some(2)));
    assert_eq!((db["p"].as_str(), db["bound_T4"].as_str()), (Some("3"), Some("1")));
    assert_eq!(db["bridges"], json!(["f"]));
}

#[test]
fn census_counts() {
    let theta = json_of(&clc(&["census", &fixture("theta.json")]));
    assert_eq!((theta["S"].as_u64(), theta["O"].as_u64(), theta["N"].as_u64()), (Some(4), Some(1), Some(3)));
    assert_eq!(theta["S_up_to_iso"], 2);
    assert_eq!(theta["records"].as_array().unwrap().len(), 8);
    let lp = json_of(&clc(&["census", &fixture("loop.json")]));
    assert_eq!(lp["S"], 1);
    assert_eq!(lp["capped_surfaces"]["projective plane"], 1);
    let db = json_of(&clc(&["census", &fixture("dumbbell.json")]));
    assert_eq!((db["S"].as_u64(), db["O"].as_u64()), (Some(1), Some(0)));
}

#[test]
fn census_csv_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("theta.csv");
    let out = clc(&["census", &fixture("theta.json"), "--format", "csv", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    assert!(lines[0].starts_with("pattern,"));
    assert!(lines.iter().any(|l| l.starts_with("xxx,a b c,1,true,true")));
}

#[test]
fn verify_statuses_and_exit_codes() {
    let theta = json_of(&clc(&["verify", &fixture("theta.json"), "--strict"]));
    assert_eq!(theta["summary"]["fail"], 0);
    assert_eq!(theta["summary"]["finding"], 0);
    let bound = theta["checks"].as_array().unwrap().iter().find(|c| c["name"] == "strip_bound").unwrap();
    assert_eq!(bound["witness"]["slack"], "0");

    let report = json_of(&clc(&["verify", &fixture("fig8.json")]));
    assert_eq!(report["summary"]["finding"], 1);
    let strict = clc(&["verify", &fixture("fig8.json"), "--strict"]);
    assert_eq!(strict.status.code(), Some(2));
    let resolved = clc(&["verify", &fixture("fig8.json"), "--resolve-cubic", "--strict"]);
    assert_eq!(resolved.status.code(), Some(0));

    let unknown = clc(&["verify", &fixture("theta.json"), "--checks", "nonsense"]);
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn input_errors_and_caps() {
    assert_eq!(clc(&["analyze", "/no/such/file.json"]).status.code(), Some(1));
    assert_eq!(clc(&["sweep", "--max-edges", "0"]).status.code(), Some(1));
    assert_eq!(clc(&["census", &fixture("theta.json"), "--max-mbc", "2"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"vertices":["a","b"],"edges":[]}"#).unwrap();
    let out = clc(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("disconnected"));
    assert_eq!(clc(&["bogus"]).status.code(), Some(1));
}

#[test]
fn sweep_rows_match_analyze() {
    let sweep = json_of(&clc(&["sweep", "--max-edges", "3"]));
    let rows = sweep["rows"].as_array().unwrap();
    let theta = rows.iter().find(|r| r["S"] == 4 && r["m"] == 3).expect("theta row");
    assert_eq!((theta["p"].as_str(), theta["bound_T4"].as_str()), (Some("4"), Some("4")));
    let db = rows.iter().find(|r| r["m"] == 3 && r["n"] == 2 && r["S"] == 1).expect("dumbbell row");
    assert_eq!((db["p"].as_str(), db["bound_T4"].as_str()), (Some("3"), Some("1")));
    let listed = clc(&["sweep", "--max-edges", "3", "--list"]);
    assert_eq!(String::from_utf8_lossy(&listed.stdout).lines().count(), rows.len());
}

#[test]
fn strip_and_tuple_patch() {
    let strip = json_of(&clc(&["strip", &fixture("theta.json")]));
    assert_eq!(strip["found"], true);
    assert_eq!(strip["boundary"]["b"], 1);
    assert_eq!(strip["switched"], json!(["a", "b"]));

    let cycles = r#"[["a","b"],["b","c"]]"#;
    let all = json_of(&clc(&["tuple-patch", &fixture("theta.json"), "--cycles", cycles]));
    let mut bs: Vec<u64> = all["results"].as_array().unwrap().iter().map(|r| r["b"].as_u64().unwrap()).collect();
    bs.sort_unstable();
    assert_eq!(bs, [2, 2, 2, 3]);
    let one = json_of(&clc(&["tuple-patch", &fixture("theta.json"), "--cycles", cycles, "--paths", "[[2,1]]"]));
    let r = &one["results"][0];
    assert_eq!(r["b"], 2);
    assert_eq!(r["enclosures"][0]["cycle"], json!(["a", "c"]));
    assert_eq!(r["enclosures"][0]["enclosed"], true);
    let bad = clc(&["tuple-patch", &fixture("theta.json"), "--paths", "[[3]]"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = clc(&["census", &fixture("theta.json")]);
    let b = clc(&["census", &fixture("theta.json")]);
    assert_eq!(a.stdout, b.stdout);
}
