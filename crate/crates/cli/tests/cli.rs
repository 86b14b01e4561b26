use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn liewb(args: &[&str]) -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_liewb"));
    c.env_remove("LIEWB_FIXTURES").args(args);
    c
}

fn run(args: &[&str]) -> Output {
    liewb(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn json_of(args: &[&str]) -> (Value, i32) {
    let out = liewb(args).args(["--format", "json"]).output().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.status.code().unwrap())
}

#[test]
fn verify_tables_is_informational_unless_strict() {
    let (v, c) = json_of(&["verify-tables"]);
    assert_eq!(c, 0);
    let diffs = v["diffs"].as_array().unwrap();
    assert_eq!(diffs.len(), 2);
    assert!(diffs[0]["matched"].as_u64().unwrap() >= 300);
    assert!(diffs[1]["matched"].as_u64().unwrap() >= 200);
    assert_eq!(v["clean"], false);
    assert_eq!(code(&["verify-tables", "--strict"]), 1);
}

fn copy_fixtures(dir: &Path) {
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures");
    for e in std::fs::read_dir(src).unwrap() {
        let e = e.unwrap();
        std::fs::copy(e.path(), dir.join(e.file_name())).unwrap();
    }
}

#[test]
fn fixture_override_with_strict() {
    let dir = tempfile::tempdir().unwrap();
    copy_fixtures(dir.path());
    // an exact transcription of sl(2) inside V2 except for the omitted brackets
    let table = json!({
        "algebra": "v2",
        "entries": ["[J2,Jm2]=J0", "[J0,J2]=2*J2", "[Jm2,J0]=2*Jm2"],
    });
    std::fs::write(dir.path().join("appendix-a.json"), table.to_string()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_liewb"))
        .env("LIEWB_FIXTURES", dir.path())
        .args([
            "verify-tables",
            "--expected",
            "appendix-a",
            "--strict",
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let d = &v["diffs"][0];
    assert_eq!(d["algebra"], "v2");
    assert_eq!(d["mismatches"], json!([]));
    assert!(!d["missing_from_table"].as_array().unwrap().is_empty());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn grading_reports_dims_and_levi() {
    let (v, c) = json_of(&["grading"]);
    assert_eq!(c, 0);
    let dims: Vec<u64> = v["dims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![6, 17, 9, 7]);
    assert_eq!(v["violations"], json!([]));
    assert_eq!(v["levi"]["radical_is_ideal"], true);
    assert_eq!(v["lower_central_series"][1], 36);
}

#[test]
fn casimir_nc_on_v2() {
    let (v, c) = json_of(&["casimir-nc", "--algebra", "v2", "--max-degree", "2"]);
    assert_eq!(c, 0);
    assert_eq!(v["raw"], json!(["C7", "C7^2"]));
    assert_eq!(v["reduced"], json!(["C7"]));
    let (v, _) = json_of(&[
        "casimir-nc",
        "--algebra",
        "v2",
        "--max-degree",
        "2",
        "--restrict-vars",
        "C1,C2,C3",
    ]);
    assert_eq!(v["raw"], json!([]));
    let (v, _) = json_of(&[
        "casimir-nc",
        "--algebra",
        "v2",
        "--max-degree",
        "2",
        "--weight-filter",
        "J0",
    ]);
    assert_eq!(v["raw"], json!(["C7", "C7^2"]));
}

#[test]
fn monomial_cap_is_a_clear_error() {
    let out = run(&[
        "casimir-nc",
        "--algebra",
        "w",
        "--max-degree",
        "3",
        "--max-monomials",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap of 100"));
}

#[test]
fn casimir_poisson_counts() {
    let (v, _) = json_of(&["casimir-poisson", "--algebra", "v2-dual", "--max-degree", "4"]);
    assert_eq!(v["candidates"], 1001);
    let (v, _) = json_of(&[
        "casimir-poisson",
        "--algebra",
        "v2-dual",
        "--max-degree",
        "4",
        "--restrict-vars",
        "C1,C2,C3,C4,C5,C6,C7",
    ]);
    assert_eq!(v["candidates"], 330);
}

#[test]
fn verify_invariants_exit_code_follows_results() {
    assert_eq!(code(&["verify-invariants", "--fixture", "sub2-casimirs"]), 0);
    let (v, c) = json_of(&["verify-invariants", "--fixture", "vm1-casimirs"]);
    assert_eq!(c, 1);
    let failing = &v["fixtures"][0]["results"][1];
    assert_eq!(failing["passed"], false);
    assert!(!failing["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn central_ext_family() {
    let (v, c) = json_of(&[
        "central-ext",
        "--algebra",
        "v2",
        "--pairs",
        "C1:C2,C1:C3,C2:C3,C1:C4,C2:C4,C3:C4,C5:C6",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["jacobi_triples"], 120);
    assert_eq!(v["free"], json!(["a4", "a7"]));
    assert_eq!(v["solution"][2], "a3 = -1/3*a4");
    let (w, _) = json_of(&["central-ext", "--fixture", "v2-ext"]);
    assert_eq!(v["solution"], w["solution"]);
    assert_eq!(code(&["central-ext", "--algebra", "v2", "--pairs", "C1-C2"]), 2);
    assert_eq!(code(&["central-ext", "--algebra", "v2"]), 2);
}

#[test]
fn virtual_copy_passes() {
    let (v, c) = json_of(&["virtual-copy"]);
    assert_eq!(c, 0);
    assert_eq!(v["radical_commutes"], true);
    assert_eq!(v["casimir_degree"], 4);
    assert_eq!(v["casimir_failures"], json!([]));
    assert!(v["expected_diff"]["matched_terms"].as_u64().unwrap() > 0);
    assert_eq!(v["realizations"][0]["pairs_checked"], 55);
}

#[test]
fn realize_vanishing_expression() {
    let out = run(&["realize", "--fixture", "w", "--expression", "C2^2 - C1*C3"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("operator: 0"));
    assert_eq!(code(&["realize", "--fixture", "multiplet", "--expression", "J0"]), 0);
    assert_eq!(code(&["realize", "--fixture", "w", "--expression", "Nope"]), 2);
}

#[test]
fn labels_report() {
    let (v, _) = json_of(&["labels"]);
    assert_eq!(v["labels"].as_array().unwrap().len(), 39);
    assert!(v["additivity_checked"].as_u64().unwrap() > 0);
}

#[test]
fn json_independent_of_jobs() {
    for args in [
        vec!["verify-tables"],
        vec!["casimir-nc", "--algebra", "v2", "--max-degree", "3"],
        vec!["verify-invariants", "--fixture", "v12-casimirs"],
        vec!["virtual-copy"],
    ] {
        let a = liewb(&args).args(["--format", "json", "--jobs", "1"]).output().unwrap();
        let b = liewb(&args).args(["--format", "json", "--jobs", "4"]).output().unwrap();
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn errors_exit_with_two() {
    assert_eq!(code(&["realize", "--fixture", "missing", "--expression", "x"]), 2);
    assert_eq!(code(&["casimir-nc", "--algebra", "v2", "--jobs", "0"]), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_liewb"))
        .env("LIEWB_FIXTURES", "/nonexistent/liewb")
        .args(["verify-tables"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
