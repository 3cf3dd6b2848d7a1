mod common;

use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_opsr");

fn opsr(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn all_spaces_but(keep: &[&str]) -> String {
    let lot = opsr::lot::load_lot_file(common::REFERENCE_LOT).unwrap();
    lot.space_ids()
        .into_iter()
        .filter(|s| !keep.contains(s))
        .collect::<Vec<_>>()
        .join(",")
}

#[test]
fn validate_reference_lot() {
    let o = opsr(&["validate", common::REFERENCE_LOT]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("36 nodes"), "{out}");
    assert!(out.contains("43 edges"), "{out}");
}

#[test]
fn validate_names_dangling_edge() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "bad.json",
        r#"{"nodes": [{"id": "E", "kind": "entrance", "x": 0, "y": 0}],
            "edges": [{"a": "E", "b": "q"}]}"#,
    );
    let o = opsr(&["validate", &path]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("E") && err.contains("q"), "{err}");
}

#[test]
fn validate_missing_file() {
    let o = opsr(&["validate", "/definitely/not/here.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn recommend_all_vacant() {
    let o = opsr(&["recommend", common::REFERENCE_LOT, "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let w = &doc["weights"];
    let sum = w["w1"].as_f64().unwrap() + w["w2"].as_f64().unwrap() + w["w3"].as_f64().unwrap();
    assert!((sum - 1.0).abs() < 1e-5);
    assert_eq!(doc["indices"].as_array().unwrap().len(), 22);
    assert!(doc["space"].is_string());
}

#[test]
fn recommend_single_vacant() {
    let occupied = all_spaces_but(&["C4"]);
    let o = opsr(&["recommend", common::REFERENCE_LOT, "--occupied", &occupied]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("recommended: C4"), "{out}");
    assert!(out.contains("fallback: yes"), "{out}");
}

#[test]
fn recommend_full_lot_exits_two() {
    let o = opsr(&[
        "recommend",
        common::REFERENCE_LOT,
        "--occupied",
        &all_spaces_but(&[]),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("full"));
}

#[test]
fn recommend_fixed_weights_and_bad_weights() {
    let o = opsr(&["recommend", common::REFERENCE_LOT, "--weights", "10,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("weights (fixed)"));
    let o = opsr(&["recommend", common::REFERENCE_LOT, "--weights", "0,0,0"]);
    assert_eq!(o.status.code(), Some(1));
    let o = opsr(&["recommend", common::REFERENCE_LOT, "--occupied", "Z9"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn weights_eight_vacant() {
    let o = opsr(&["weights", common::EIGHT_SPACE_LOT]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("k = 0.480898"), "{}", stdout(&o));
}

#[test]
fn weights_uniform_lot_falls_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "uniform.json",
        r#"{"nodes": [
            {"id": "e", "kind": "entrance", "x": 0, "y": 0},
            {"id": "x", "kind": "exit", "x": 0, "y": 12},
            {"id": "j", "kind": "intersection", "x": 0, "y": 6},
            {"id": "p1", "kind": "space", "x": -6, "y": 6},
            {"id": "p2", "kind": "space", "x": 6, "y": 6}],
           "edges": [{"a": "e", "b": "j"}, {"a": "j", "b": "x"},
                     {"a": "j", "b": "p1"}, {"a": "j", "b": "p2"}]}"#,
    );
    let o = opsr(&["weights", &path]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("0.333333").count(), 3, "{out}");
    assert!(out.contains("fallback: yes"), "{out}");
}

#[test]
fn weights_one_vacant_exits_one() {
    let o = opsr(&[
        "weights",
        common::EIGHT_SPACE_LOT,
        "--occupied",
        "p1,p2,p3,p4,p5,p6,p7",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("at least two"));
}

#[test]
fn compare_tables() {
    let o = opsr(&["compare", common::REFERENCE_LOT]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    // Header, 20 cells, summary.
    assert_eq!(out.lines().count(), 22, "{out}");
    let o = opsr(&["compare", common::REFERENCE_LOT, "--scenario", "A"]);
    assert_eq!(stdout(&o).lines().count(), 7);
}

#[test]
fn compare_without_c3_exits_one() {
    let text = std::fs::read_to_string(common::REFERENCE_LOT).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let strip = |v: &mut serde_json::Value, f: &dyn Fn(&serde_json::Value) -> bool| {
        v.as_array_mut().unwrap().retain(|x| !f(x));
    };
    strip(&mut doc["nodes"], &|n| n["id"] == "C3");
    strip(&mut doc["edges"], &|e| e["a"] == "C3" || e["b"] == "C3");
    strip(&mut doc["neighbors"], &|p| p[0] == "C3" || p[1] == "C3");
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "no_c3.json", &doc.to_string());
    assert_eq!(opsr(&["validate", &path]).status.code(), Some(0));
    let o = opsr(&["compare", &path, "--scenario", "C"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("C3"));
}

#[test]
fn render_variants() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("lot.svg");
    let o = opsr(&[
        "render",
        common::REFERENCE_LOT,
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<rect").count(), 22);
    assert_eq!(text.matches("<polyline").count(), 2);

    let full = dir.path().join("full.svg");
    let o = opsr(&[
        "render",
        common::REFERENCE_LOT,
        "--occupied",
        &all_spaces_but(&[]),
        "--out",
        full.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    let text = std::fs::read_to_string(&full).unwrap();
    assert!(!text.contains("recommended\""));
    assert!(!text.contains("<polyline"));

    let bad = dir.path().join("missing").join("x.svg");
    let o = opsr(&[
        "render",
        common::REFERENCE_LOT,
        "--out",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn occupied_flag_overrides_file_list() {
    let text = std::fs::read_to_string(common::EIGHT_SPACE_LOT).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["occupied"] = serde_json::json!(["p1", "p2", "p3", "p4", "p5", "p6", "p7"]);
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "occ.json", &doc.to_string());
    assert_eq!(opsr(&["weights", &path]).status.code(), Some(1));
    let o = opsr(&["weights", &path, "--occupied", ""]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("candidates: 8"));
}
