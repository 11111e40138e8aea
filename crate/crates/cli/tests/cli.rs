use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn repcoh(args: &[&str]) -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_repcoh"));
    c.args(args).env_remove("REPCOH_INTERVAL_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    repcoh(args).output().unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = repcoh(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn ranks(v: &Value) -> Vec<u64> {
    v["groups"].as_array().unwrap().iter().map(|g| g["rank"].as_u64().unwrap()).collect()
}

fn schema() -> jsonschema::Validator {
    let text = include_str!("../../../docs/report.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

#[test]
fn json_reports_match_schema() {
    let validator = schema();
    for args in [
        &["--variant", "G", "--family", "chain 3"][..],
        &["--variant", "E", "--family", "dandelion 2", "--generators"],
        &["--variant", "tildeE", "--family", "chain 2", "--max-dim", "2"],
        &["--variant", "tildeG", "--family", "chain 3", "--basis", "singletons", "--max-dim", "2"],
        &["--variant", "G", "--family", "pseudo_circle", "--basis", "nerve"],
    ] {
        let mut all = vec!["compute", "--emit", "json"];
        all.extend_from_slice(args);
        let v = json(&run(&all));
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
}

#[test]
fn csv_agrees_with_json() {
    let v = json(&run(&["compute", "--variant", "G", "--family", "chain 4", "--emit", "json"]));
    let out = run(&["compute", "--variant", "G", "--family", "chain 4", "--emit", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("dim,rank,torsion"));
    let csv: Vec<u64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(csv, ranks(&v));
    assert_eq!(csv, [3, 78, 0, 0, 0]);
}

#[test]
fn stdin_and_file_inputs_agree() {
    let text = String::from_utf8(run(&["family", "dandelion", "3"]).stdout).unwrap();
    let piped = json(&with_stdin(&["compute", "--variant", "E", "--input", "-", "--max-dim", "1", "--emit", "json"], &text));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d3.poset");
    std::fs::write(&path, &text).unwrap();
    let filed = json(&run(&[
        "compute", "--variant", "E", "--input", path.to_str().unwrap(), "--max-dim", "1", "--emit", "json",
    ]));
    assert_eq!(ranks(&piped), [8, 21]);
    assert_eq!(piped["groups"], filed["groups"]);
}

#[test]
fn invalid_input_exits_two() {
    let out = with_stdin(&["compute", "--variant", "G", "--input", "-"], "rel a b\nrel b a\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cycle"));
    let out = run(&["compute", "--variant", "G", "--input", "/nonexistent/poset"]);
    assert_eq!(out.status.code(), Some(2));
    // Without a bound the tilde complexes are unbounded.
    let out = run(&["compute", "--variant", "tildeE", "--family", "chain 2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn interval_cap_exits_three() {
    let out = run(&["compute", "--variant", "G", "--family", "chain 4", "--cap", "5"]);
    assert_eq!(out.status.code(), Some(3));
    let out = repcoh(&["compute", "--variant", "G", "--family", "chain 4"])
        .env("REPCOH_INTERVAL_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // The flag wins over the environment.
    let out = repcoh(&["compute", "--variant", "G", "--family", "chain 4", "--cap", "100000"])
        .env("REPCOH_INTERVAL_CAP", "5")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn singleton_basis_over_three() {
    let v = json(&run(&[
        "compute", "--variant", "tildeG", "--family", "chain 3", "--basis", "singletons", "--max-dim", "2", "--emit",
        "json",
    ]));
    assert_eq!(v["basis"], "singletons");
    assert_eq!(v["basis_sizes"][0], 0);
    assert_eq!(ranks(&v)[1], 3);
}

#[test]
fn generators_are_listed() {
    let v = json(&run(&["compute", "--variant", "G", "--family", "chain 3", "--max-dim", "0", "--generators", "--emit", "json"]));
    let gens = v["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 3);
    assert!(gens.iter().all(|g| g["dim"] == 0 && g["order"].is_null()));
}

#[test]
fn nerve_basis_sees_the_circle() {
    let v = json(&run(&["compute", "--variant", "G", "--family", "pseudo_circle", "--basis", "nerve", "--emit", "json"]));
    assert_eq!(ranks(&v), [1, 1]);
}

#[test]
fn family_output_parses_back() {
    for spec in [["chain", "4"], ["corolla", "3"], ["antichain", "2"]] {
        let out = run(&["family", spec[0], spec[1]]);
        assert!(out.status.success());
        let piped = with_stdin(&["compute", "--variant", "G", "--input", "-", "--max-dim", "0"], &String::from_utf8(out.stdout).unwrap());
        assert!(piped.status.success());
    }
    assert_eq!(run(&["family", "nope"]).status.code(), Some(2));
}
