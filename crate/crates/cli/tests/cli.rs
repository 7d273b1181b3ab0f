use std::process::{Command, Output};

use powerops::homalg::interchange::contraction_from_json;
use powerops::homalg::verify_k_contraction;
use serde_json::Value;

fn powerops(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powerops")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn partition_homology_m9_filter() {
    let out = powerops(&["partition-homology", "--m", "9", "--group", "3x3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let z = &v["data"][0];
    assert_eq!(z["ring"], "Z");
    assert_eq!(z["homology"]["2"]["free_rank"], 3);
}

#[test]
fn partition_homology_m4_markdown() {
    let out = powerops(&["partition-homology", "--m", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("| P̄_4 | - | Z | H3 = R^6 |"), "{text}");
    assert!(text.contains("result: PASS"));
}

#[test]
fn koszul_check_verdicts() {
    let out = powerops(&["koszul-check", "--ring", "truncated-cubic", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["data"]["koszul"]["koszul"], false);
    assert_eq!(v["data"]["quadratic"]["quadratic"], false);

    let ring = format!("{}/../core/rings/tensor2.json", env!("CARGO_MANIFEST_DIR"));
    let v = json_of(&powerops(&["koszul-check", "--ring", &ring, "--format", "json"]));
    assert_eq!(v["data"]["dual"]["local"][0]["c_ranks"], serde_json::json!([1, 2, 0, 0, 0, 0]));
}

#[test]
fn corrupted_ring_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"base": {"kind": "field", "p": 2}, "dims": [1, 1], "mult": {"1,1": []}}"#).unwrap();
    let out = powerops(&["koszul-check", "--ring", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mult"));
}

#[test]
fn contraction_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    let out = powerops(&["uniform-contract", "--p", "3", "--k", "2", "--functor", "orbit", "--contraction", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let kc = contraction_from_json(&v).unwrap();
    assert_eq!(kc.k, 2);
    assert!(verify_k_contraction(&kc).unwrap().pass);
}

#[test]
fn failed_transfer_sets_exit_code() {
    let out = powerops(&["uniform-contract", "--p", "2", "--k", "2", "--transfer", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert!(v["data"]["transfer"]["verdict"].as_str().unwrap().contains("(d)"));
}

#[test]
fn guard_and_override() {
    let out = powerops(&["shelling-verify", "--p", "2", "--k", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--unsafe-large"));
}

#[test]
fn seeded_output_is_deterministic() {
    let args = ["linearize-demo", "--functor", "tensor2", "--seed", "7", "--format", "csv"];
    let a = powerops(&args);
    let b = powerops(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8(a.stdout).unwrap().contains("seed,7"));
}

#[test]
fn elementary_union_reports_a_verdict() {
    let v = json_of(&powerops(&["experiment-elementary-union", "--m", "4", "--format", "json"]));
    assert!(v["data"]["verdict"].is_string());
    assert!(v["data"]["equal"].is_boolean());
}
