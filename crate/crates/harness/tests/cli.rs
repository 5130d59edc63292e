use std::path::Path;
use std::process::{Command, Output};

use relaynet_core::coupling::fixed_point;
use relaynet_core::optimizer::baseline_association;
use relaynet_core::scenario::{generate_hexnet, HexNetParams};
use relaynet_core::{FixedPointConfig, LoadVector, Scenario};
use serde_json::Value;

fn relaynet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relaynet")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = relaynet(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn solve_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let params = HexNetParams { rng_seed: 4, ues_per_region: 5, ..Default::default() };
    let s: Scenario<f64> = generate_hexnet(&params).unwrap();
    let path = write(dir.path(), "s.json", &s.to_json().unwrap());
    let report: Value = serde_json::from_str(&ok(&["solve", &path])).unwrap();
    let lib = fixed_point(&s, &baseline_association(&s), &LoadVector::zeros(&s), &FixedPointConfig::default()).unwrap();
    assert_eq!(report["energy"].as_f64().unwrap(), lib.energy);
    assert_eq!(report["feasible"].as_bool().unwrap(), lib.feasible);
}

#[test]
fn gen_is_reproducible_and_readable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    ok(&["gen", "--seed", "9", "--out", a.to_str().unwrap()]);
    let b = ok(&["gen", "--seed", "9"]);
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text.trim_end(), b.trim_end());
    let s: Scenario<f64> = Scenario::from_json(&text).unwrap();
    assert_eq!(s.n_ue(), 140);
}

#[test]
fn association_files_round_trip_through_solve() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "g.json", r#"{"num_nodes": 3, "edges": [[0, 1], [1, 2]]}"#);
    let scen = dir.path().join("s.json");
    ok(&["gadget", &graph, "--out", scen.to_str().unwrap()]);
    let oracle: Value = serde_json::from_str(&ok(&["oracle", scen.to_str().unwrap()])).unwrap();
    let assoc = write(dir.path(), "a.json", &oracle["association"].to_string());
    let again: Value =
        serde_json::from_str(&ok(&["solve", scen.to_str().unwrap(), "--assoc", &assoc])).unwrap();
    assert_eq!(again["energy"], oracle["energy"]);
    let relays: Vec<&str> = oracle["association"]["serving"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["cell"].as_str().unwrap())
        .filter(|c| c.starts_with("rc"))
        .collect();
    assert_eq!(relays, ["rc0", "rc2"]);
}

#[test]
fn oracle_is_no_worse_than_the_algorithm_on_k2() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "k2.json", r#"{"num_nodes": 2, "edges": [[0, 1]]}"#);
    let scen = dir.path().join("s.json");
    ok(&["gadget", &graph, "--out", scen.to_str().unwrap()]);
    let s = scen.to_str().unwrap();
    let oracle: Value = serde_json::from_str(&ok(&["oracle", s])).unwrap();
    let algo: Value = serde_json::from_str(&ok(&["solve", s, "--assoc", "algo"])).unwrap();
    assert!(algo["feasible"].as_bool().unwrap());
    assert!(oracle["energy"].as_f64().unwrap() <= algo["energy"].as_f64().unwrap());
}

#[test]
fn sweep_writes_one_row_per_demand_point() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.json",
        r#"{"scenario": {"generated": {"ues_per_region": 4, "rcs_per_region": 1}},
            "demands_bps": [5e5, 1e6, 2e6], "trials": 2, "seed_base": 3}"#,
    );
    let csv = ok(&["sweep", &spec, "--eta", "5"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "demand_bps,trials_ok,baseline_energy_mean,algo_energy_mean,improvement_pct");
    assert_eq!(lines.len(), 4);
    assert_eq!(csv, ok(&["sweep", &spec, "--eta", "5"]));
    for row in &lines[1..] {
        let f: Vec<&str> = row.split(',').collect();
        if let (Ok(b), Ok(a), Ok(i)) = (f[2].parse::<f64>(), f[3].parse::<f64>(), f[4].parse::<f64>()) {
            assert!((100.0 * (b - a) / b - i).abs() < 1e-9);
        }
    }
}

#[test]
fn failures_exit_nonzero_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = relaynet(&["solve", dir.path().join("missing.json").to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1);

    let bad = write(dir.path(), "bad.json", r#"{"num_nodes": 2, "edges": [[0, 5]]}"#);
    let out = relaynet(&["gadget", &bad]);
    assert!(!out.status.success());
    assert_eq!(String::from_utf8(out.stderr).unwrap().trim_end().lines().count(), 1);

    let spec = write(dir.path(), "spec.json", r#"{"demands_bps": [2e6, 1e6]}"#);
    assert!(!relaynet(&["sweep", &spec]).status.success());

    let graph = write(dir.path(), "g.json", r#"{"num_nodes": 4, "edges": []}"#);
    let scen = dir.path().join("s.json");
    ok(&["gadget", &graph, "--out", scen.to_str().unwrap()]);
    let out = relaynet(&["oracle", scen.to_str().unwrap(), "--limit", "4"]);
    assert!(!out.status.success());
}
