//! End-to-end checks of the `wce` binary: exit codes, diagnostics, report
//! schema, and command behaviors.

use std::path::Path;
use std::process::{Command, Output};

fn wce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wce"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

const NILPOTENT: &str = r#"{
    "name": "nilpotent",
    "masses": [1.0, 1.0],
    "partition": [[0, 1]],
    "u": [[1.0, 0.0], [-1.0, 0.0]],
    "w": [[1.0, 0.0], [1.0, 0.0]],
    "p": 2.0
}"#;

#[test]
fn analyze_nilpotent_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "nilpotent.json", NILPOTENT);
    let out = wce(&["analyze", &path, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["spectral_radius_formula"], 0.0);
    assert_eq!(report["chain_report"]["ascent"], 2);
    assert_eq!(report["power_bounded_analysis"]["power_bounded_paper"], true);
    assert_eq!(report["power_bounded_analysis"]["power_bounded_empirical"], true);
    assert_eq!(report["verify_ascent_theorem"], "pass");
    assert_eq!(report["verify_descent_theorem"], "inapplicable");
    assert_eq!(report["discrepancies"].as_array().unwrap().len(), 0);
}

#[test]
fn analyze_report_schema_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "nilpotent.json", NILPOTENT);
    let out = wce(&["analyze", &path, "--format", "json"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in [
        "atoms",
        "blocks",
        "p",
        "tolerances",
        "bound_functional_sup",
        "spectral_radius_formula",
        "gelfand_estimate",
        "gelfand_ratio_estimate",
        "chain_report",
        "verify_ascent_theorem",
        "verify_descent_theorem",
        "verify_corollary_sums",
        "quasi_complement_check",
        "decomposition_theorem_check",
        "power_bounded_analysis",
        "cesaro_bounded_analysis",
        "i_minus_t_analysis",
        "lemma_norm_check",
        "aluthge",
        "neumann_inverse",
        "discrepancies",
    ] {
        assert!(
            report.get(key).is_some(),
            "missing report key {key}: {report}"
        );
    }
}

#[test]
fn analyze_expanding_scenario_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let scenario_path = dir.path().join("expanding.json");
    let out = wce(&[
        "generate",
        "--seed",
        "41",
        "--regime",
        "expanding",
        "--out",
        scenario_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = wce(&[
        "analyze",
        scenario_path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["power_bounded_analysis"]["power_bounded_paper"], false);
    assert_eq!(
        report["power_bounded_analysis"]["power_bounded_empirical"],
        false
    );
}

#[test]
fn analyze_unimodular_scenario_reports_discrepancy() {
    // |E(uw)| = 1: the strict criterion fails while the norms stay flat,
    // which is the recorded open-question case; analyze signals it with
    // exit code 2
    let dir = tempfile::tempdir().unwrap();
    let scenario = r#"{
        "masses": [1.0, 1.0],
        "partition": [[0, 1]],
        "u": [[1.0, 0.0], [1.0, 0.0]],
        "w": [[1.0, 0.0], [1.0, 0.0]],
        "p": 2.0
    }"#;
    let path = write(dir.path(), "projection.json", scenario);
    let out = wce(&["analyze", &path, "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["power_bounded_analysis"]["power_bounded_paper"], false);
    assert_eq!(
        report["power_bounded_analysis"]["power_bounded_empirical"],
        true
    );
    let discrepancies = report["discrepancies"].as_array().unwrap();
    assert!(discrepancies
        .iter()
        .any(|d| d["check"] == "power_bounded_strict_vs_empirical"));
}

#[test]
fn analyze_rejects_bad_inputs_with_codes() {
    let dir = tempfile::tempdir().unwrap();

    let path = write(dir.path(), "broken.json", "{ not json");
    let out = wce(&["analyze", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed-json"));

    let path = write(
        dir.path(),
        "zero-mass.json",
        r#"{"masses":[0.0],"partition":[[0]],"u":[[1,0]],"w":[[1,0]],"p":2}"#,
    );
    let out = wce(&["analyze", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonpositive-mass"));

    let out = wce(&["analyze", "/nonexistent/scenario.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn power_command_prints_closed_form_weights() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "nilpotent.json", NILPOTENT);
    let out = wce(&["power", &path, "--n", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["n"], 2);
    // E(uw) = 0, so the outer weight of T^2 vanishes
    for z in value["outer_weight"].as_array().unwrap() {
        assert_eq!(z[0], 0.0);
        assert_eq!(z[1], 0.0);
    }
    assert_eq!(value["inner_weight"][0][0], 1.0);
    assert_eq!(value["inner_weight"][1][0], -1.0);

    let out = wce(&["power", &path, "--n", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn generate_is_deterministic_and_regimes_hold() {
    let a = wce(&["generate", "--seed", "5", "--regime", "contractive"]);
    let b = wce(&["generate", "--seed", "5", "--regime", "contractive"]);
    assert_eq!(a.stdout, b.stdout);
    let scenario: wce_cli::scenario::Scenario =
        serde_json::from_slice(&a.stdout).unwrap();
    let op = scenario.to_operator().unwrap();
    assert!(op.euw().max_abs() <= 0.9 + 1e-12);
}

#[test]
fn verify_single_instance_is_deterministic() {
    let a = wce(&["verify", "--seed", "7", "--instances", "1"]);
    let b = wce(&["verify", "--seed", "7", "--instances", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8_lossy(&a.stdout);
    assert!(text.contains("power_closed_form_oracle"));
    assert!(text.contains("ALL PASS"));
}

#[test]
fn verify_rejects_zero_instances() {
    let out = wce(&["verify", "--seed", "7", "--instances", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn minimal_single_atom_scenario_analyzes() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "one.json",
        r#"{"masses":[1.0],"partition":[[0]],"u":[[1.0,0.0]],"w":[[1.0,0.0]],"p":2.0}"#,
    );
    // identity on one atom: E(uw) = 1, the projection case
    let out = wce(&["analyze", &path, "--format", "json"]);
    assert_eq!(out.status.code(), Some(2)); // |E(uw)| = 1 discrepancy case
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["spectral_radius_formula"], 1.0);
    assert_eq!(report["cesaro_bounded_analysis"]["cesaro_bounded"], true);
}
