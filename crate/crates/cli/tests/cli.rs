use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gradedlie"))
}

fn fixture(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gradedlie-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> (Output, Option<Value>) {
    let out = bin().args(args).output().unwrap();
    let json = serde_json::from_slice(&out.stdout).ok();
    (out, json)
}

fn strs(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

const HEISENBERG: &str = "field = Q\ngen x weight 1\ngen y weight 1\nrel [x,[x,y]]\nrel [y,[x,y]]\n";
const C4: &str = "vertices a b c d\nedge a b\nedge b c\nedge c d\nedge d a\n";

#[test]
fn dims_of_heisenberg() {
    let f = fixture("heisenberg.lie", HEISENBERG);
    let (out, json) = run(&["dims", f.to_str().unwrap(), "--max-degree", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let json = json.unwrap();
    assert_eq!(json["schema"], 1);
    assert_eq!(json["seed"].as_str().unwrap(), "24301");
    assert_eq!(strs(&json["result"]["dims"]), ["2", "1", "0", "0"]);
}

#[test]
fn hall_counts() {
    let (out, json) = run(&["hall", "--gens", "x,y", "--max-degree", "5"]);
    assert!(out.status.success());
    assert_eq!(strs(&json.unwrap()["result"]["counts"]), ["2", "1", "2", "3", "6"]);
}

#[test]
fn four_cycle_is_not_chordal() {
    let f = fixture("c4.graph", C4);
    let (out, json) = run(&["raag", "chordal", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = &json.unwrap()["result"];
    assert_eq!(r["certificate"]["kind"], "induced-cycle");
    assert_eq!(r["certificate"]["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(r["certificate_valid"], true);
}

#[test]
fn path_is_chordal_and_coherent() {
    let f = fixture("p4.graph", "vertices a b c d\nedge a b\nedge b c\nedge c d\n");
    let (out, _) = run(&["raag", "chordal", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let (out, json) = run(&["raag", "verdict", f.to_str().unwrap(), "--max-degree", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json.unwrap()["result"];
    assert_eq!(r["verdict"], "coherent");
    assert_eq!(r["decomposition_valid"], true);
    assert_eq!(r["derived_subalgebra"]["free"], true);
    assert_eq!(r["homology_finiteness"]["status"], "consistent");
    assert_eq!(r["homology_finiteness"]["top_weights"], serde_json::json!(["1", "2", "none", "none"]));
}

#[test]
fn resolution_of_four_cycle() {
    let f = fixture("c4r.graph", C4);
    let (out, json) = run(&["raag", "resolve", f.to_str().unwrap(), "--max-degree", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json.unwrap()["result"];
    assert_eq!(strs(&r["free_ranks"]), ["1", "4", "4"]);
    assert_eq!(strs(&r["clique_polynomial"]), ["1", "-4", "4"]);
}

#[test]
fn malformed_input_exits_two_with_position() {
    let f = fixture("bad.lie", "gen x weight 1\nrel [x,\n");
    let (out, _) = run(&["dims", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.lie") && err.contains("line 2"), "{err}");
    let (out, _) = run(&["dims", "/nonexistent/file.lie"]);
    assert_eq!(out.status.code(), Some(2));
    let (out, _) = run(&["dims", f.to_str().unwrap(), "--max-degree", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exceeded_cap_is_reported() {
    let f = fixture("engel.lie", "gen x weight 1\ngen y weight 1\nrel [y,[x,y]]\n");
    let (out, _) = run(&["onerelator", "decompose", f.to_str().unwrap(), "--cap", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("elimination steps"));
    let (out, json) = run(&["onerelator", "decompose", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json.unwrap()["result"];
    assert_eq!(r["layers"].as_array().unwrap().len(), 2);
    assert_eq!(r["source_dims"], r["rebuilt_dims"]);
}

#[test]
fn homology_table_shape() {
    let f = fixture("heis2.lie", HEISENBERG);
    let (out, json) = run(&["homology", f.to_str().unwrap(), "--max-degree", "4", "--hom-bound", "3"]);
    assert!(out.status.success());
    let h = &json.unwrap()["result"]["homology"];
    assert_eq!(h["1"]["1"], "2");
    assert_eq!(h["2"]["3"], "2");
    assert_eq!(h["3"]["4"], "1");
}

#[test]
fn hopf_and_hilbert() {
    let f = fixture("heis3.lie", HEISENBERG);
    let (_, json) = run(&["hopf", f.to_str().unwrap(), "--max-degree", "5"]);
    assert_eq!(strs(&json.unwrap()["result"]["h2"]), ["0", "0", "2", "0", "0"]);
    let (_, json) = run(&["hilbert", f.to_str().unwrap(), "--max-degree", "4"]);
    assert_eq!(strs(&json.unwrap()["result"]["series"]), ["1", "2", "4", "6", "9"]);
}

#[test]
fn infer_subalgebra_presentation() {
    let f = fixture("mn.lie", "gen a weight 1\ngen b weight 1\ngen x weight 1\nrel [a,b]\n");
    let (out, json) = run(&["infer", f.to_str().unwrap(), "--gen", "a=a", "--gen", "b=b", "--gen", "z=[x,a]", "--gen", "t=[x,b]", "--max-degree", "6"]);
    assert!(out.status.success());
    let r = &json.unwrap()["result"];
    assert_eq!(strs(&r["relator_weights"]), ["2", "3"]);
}

#[test]
fn graph_verify_hnn() {
    fixture("u.lie", "gen a weight 1\ngen b weight 2\n");
    fixture("e.lie", "gen z weight 2\n");
    let g = fixture("hnn.graph", "vertex u u.lie\nedge h u u e.lie\nmap sigma h z->b\nder h z->[a,[a,b]] stable-weight 2\n");
    let (out, json) = run(&["graph", "verify", g.to_str().unwrap(), "--max-degree", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json.unwrap()["result"]["exact"], true);
}

#[test]
fn example_report_passes() {
    let (out, json) = run(&["example", "subalgebra", "--max-degree", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let claims = json.unwrap()["result"]["claims"].as_array().unwrap().clone();
    assert!(claims.iter().all(|c| c["passed"] == true));
    let h2 = claims.iter().find(|c| c["id"] == "h2-ce").unwrap();
    assert_eq!(h2["computed"], "2");
}

#[test]
fn reports_are_byte_identical() {
    let f = fixture("heis4.lie", HEISENBERG);
    let a = bin().args(["homology", f.to_str().unwrap(), "--max-degree", "5", "--seed", "7"]).output().unwrap();
    let b = bin().args(["homology", f.to_str().unwrap(), "--max-degree", "5", "--seed", "7"]).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8(a.stdout).unwrap().contains("\"seed\": \"7\""));
}

#[test]
fn out_flag_writes_file() {
    let f = fixture("heis5.lie", HEISENBERG);
    let target = f.with_file_name("report.json");
    let out = bin().args(["dims", f.to_str().unwrap(), "--max-degree", "3", "--out", target.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(strs(&v["result"]["dims"]), ["2", "1", "0"]);
}
