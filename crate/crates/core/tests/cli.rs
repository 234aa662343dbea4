use std::process::{Command, Output};

use binform::codec;
use serde_json::Value;

fn binform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binform")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    codec::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn ring_reports() {
    let out = binform(&["ring", "--form", "[2,3,5]"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["index_J_I"], "2/1");
    assert_eq!(v["disc"], "-31");
    assert_eq!(v["primitive"], true);

    let v = json(&binform(&["ring", "--form", r#"{"coeffs":["1","0","1"]}"#]));
    assert_eq!(v["disc"], "-4");
    assert_eq!(v["I_f"], v["J_f"]);
    assert_eq!(v["I_f"], codec::parse(r#"[["1/1","0/1"],["0/1","1/1"]]"#).unwrap());
}

#[test]
fn usage_errors() {
    assert_eq!(code(&binform(&["ring", "--form", "[0,0]"])), 2);
    assert_eq!(code(&binform(&["ring", "--form", "[2,3"])), 2);
    assert_eq!(code(&binform(&["verify", "--suite", "nonsense"])), 2);
    assert_eq!(code(&binform(&["frobnicate"])), 2);
    assert_eq!(code(&binform(&["psi", "--tensor", "/nonexistent/tensor.json"])), 2);
}

#[test]
fn degenerate_inputs() {
    let zero = r#"{"A1":[[0,0],[0,0]],"A2":[[0,0],[0,0]]}"#;
    assert_eq!(code(&binform(&["psi", "--tensor", zero])), 3);
    assert_eq!(code(&binform(&["partner", "--form", "[1,2,1]"])), 3);
}

#[test]
fn psi_phi_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let tensor_path = dir.path().join("tensor.json");
    let pair_path = dir.path().join("pair.json");
    let text = r#"{"A1":[["2","1","0"],["0","1","3"],["1","0","1"]],"A2":[["0","1","1"],["1","-1","0"],["2","0","1"]],"n":3}"#;
    std::fs::write(&tensor_path, text).unwrap();
    let out = binform(&["psi", "--tensor", tensor_path.to_str().unwrap(), "--out", pair_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = binform(&["phi", "--pair", pair_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::str::from_utf8(&out.stdout).unwrap().trim_end(), text);
}

#[test]
fn companion_gives_regular_representation() {
    // x^3 + 2x^2y - 3xy^2 + 5y^3
    let companion = r#"{"A1":[[1,0,0],[0,1,0],[0,0,1]],"A2":[[0,0,5],[-1,0,-3],[0,-1,2]]}"#;
    let det = json(&binform(&["det", "--tensor", companion]));
    assert_eq!(det["coeffs"], codec::parse(r#"["1","2","-3","5"]"#).unwrap());
    let pair = json(&binform(&["psi", "--tensor", companion]));
    // N is the theta-power basis: zeta_1 = theta acts by the companion matrix -A2
    let comp = codec::parse(r#"[["0","0","-5"],["1","0","3"],["0","1","-2"]]"#).unwrap();
    assert_eq!(pair["N"]["actions"][0], comp);
}

#[test]
fn census_and_cap() {
    let v = json(&binform(&["orbits", "--form", "[1,0,1]", "--bound", "1"]));
    assert_eq!(v["classes"].as_array().unwrap().len(), 1);
    assert_eq!(v["budget_limited"], true);
    let capped = Command::new(env!("CARGO_BIN_EXE_binform"))
        .args(["orbits", "--form", "[1,0,1]", "--bound", "1"])
        .env("BINFORM_MAX_ENUM", "10")
        .output()
        .unwrap();
    assert_eq!(code(&capped), 2);
}

#[test]
fn partner_of_unit_ideal_is_i_f() {
    let ring = json(&binform(&["ring", "--form", "[2,3,5]"]));
    let v = json(&binform(&["partner", "--form", "[2,3,5]"]));
    assert_eq!(v["partner"], ring["I_f"]);
    assert_eq!(v["verdict"]["norm_ok"], true);
    assert!(v.get("flag").is_none());
    let flagged = binform(&["partner", "--form", "[2,4,6]"]);
    assert_eq!(code(&flagged), 0);
    assert!(json(&flagged)["flag"].is_string());
}

#[test]
fn verify_examples_exit_zero_and_are_deterministic() {
    let runs = [
        vec!["verify", "--suite", "roundtrip", "--n", "3", "--bound", "5", "--count", "200", "--seed", "42"],
        vec!["verify", "--suite", "universal", "--n", "2", "--count", "1000"],
        vec!["verify", "--suite", "balance", "--form", "[2,3,5]", "--count", "200"],
    ];
    for args in &runs {
        let out = binform(args);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["ok"], true);
    }
    let a = binform(&runs[0]);
    let b = binform(&runs[0]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_writes_report_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = binform(&["verify", "--suite", "all", "--count", "6", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = codec::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["suites"].as_array().unwrap().len(), 6);
}
