use std::process::{Command, Output};

use serde_json::Value;

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsp-forge"))
        .args(args)
        .env_remove("RSP_FORGE_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn exit_codes() {
    assert_eq!(forge(&["correctness", "--protocol", "P1", "--theta", "3"]).status.code(), Some(0));
    assert_eq!(forge(&["correctness", "--protocol", "P1", "--theta", "9"]).status.code(), Some(2));
    assert_eq!(forge(&["sweep", "--p0", "2"]).status.code(), Some(2));
    assert_eq!(forge(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(forge(&["--help"]).status.code(), Some(0));
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("run{i}.json"))).collect();
    for p in &paths {
        let out = forge(&["security", "--protocol", "P4", "--seed", "11", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["config"]["seed"], 11);
    assert_eq!(v["pass"], true);
}

#[test]
fn seed_can_come_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_rsp-forge"))
        .args(["correctness", "--protocol", "P3"])
        .env("RSP_FORGE_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(json(&out)["config"]["seed"], 5);
}

#[test]
fn sweep_rows_match_the_closed_forms() {
    let out = forge(&["sweep", "--n", "2,3", "--p0", "0,0.5,1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["n", "p_0", "p_1", "p_2", "delta_1", "delta_2", "advantage", "bound"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    let get = |n: &str, p0: &str| {
        let r = rows.iter().find(|r| &r[0] == n && r[1].parse::<f64>().unwrap() == p0.parse::<f64>().unwrap());
        r.unwrap()[6].parse::<f64>().unwrap()
    };
    assert!((get("2", "0") - 1.0 / 3.0).abs() < 1e-9);
    assert!(get("2", "1").abs() < 1e-9);
    assert!((get("3", "0.5") - 0.5 / 7.0).abs() < 1e-9);
}

#[test]
fn clifford_state_security_reports_both_routes() {
    let out = forge(&["security", "--protocol", "P2", "--n", "2", "--p0", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    let adv = checks.iter().find(|c| c["name"].as_str().unwrap().contains("advantage")).unwrap();
    assert!((adv["closed_form"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
    assert!((adv["state_level"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
}
