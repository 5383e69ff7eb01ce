//! End-to-end runs of the binary: exit codes, formats, config files.

use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_keldysh-disk")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn eig_lists_disk_eigenvalues() {
    let out = run(&["eig", "--gamma", "0", "--N", "2"]);
    assert!(out.status.success());
    let doc = json(&out);
    let mut values: Vec<f64> = doc["rows"].as_array().unwrap().iter().map(|r| r["eigenvalue"].as_f64().unwrap()).collect();
    values.sort_by(f64::total_cmp);
    assert_eq!(values, vec![1.0, 4.0, 4.0, 9.0, 9.0, 9.0]);
    assert_eq!(doc["meta"]["command"], "eig");
    assert_eq!(doc["meta"]["config"]["N"], 2);
}

#[test]
fn eig_norm_at_half() {
    let doc = json(&run(&["eig", "--gamma", "0.5", "--N", "0"]));
    let row = &doc["rows"][0];
    assert!((row["norm_sq"].as_f64().unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
    assert!(row["residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn csv_has_a_header_and_one_line_per_row() {
    let out = run(&["eig", "--gamma", "-0.5:0.5:0.5", "--N", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "gamma,n,k,m,eigenvalue,norm_sq,residual");
    assert_eq!(lines.len(), 1 + 3 * 3);
}

#[test]
fn dn_rows_are_mode_symmetric_and_match_the_oracle() {
    let doc = json(&run(&["dn", "--gamma", "-0.25", "--M", "3", "--N", "64", "--lambda", "-1"]));
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    for r in rows {
        assert!(r["oracle_diff"].as_f64().unwrap() < 1e-6);
        assert!(r["symmetry_diff"].as_f64().unwrap() < 1e-12);
        assert_eq!(r["mu_im"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn krein_certificates_and_scan() {
    let doc = json(&run(&["krein", "--gamma", "0.5", "--B", "2", "--M", "1", "--N", "8", "--scan", "4:12:60"]));
    let cert = &doc["certificates"][0];
    assert!(cert["operator_residual"].as_f64().unwrap() < 1e-6 * cert["rhs_norm"].as_f64().unwrap());
    let scan = doc["scan"].as_array().unwrap();
    assert_eq!(scan.len(), 1);
    // the root found by the scan is where the solve must refuse
    let lam = scan[0]["lambda"].as_f64().unwrap().to_string();
    let out = run(&["krein", "--gamma", "0.5", "--B", "2", "--M", "1", "--N", "8", "--lambda", &lam]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("candidate eigenvalue"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["eig", "--bogus"]).status.code(), Some(64));
    assert_eq!(run(&["audit", "nothing"]).status.code(), Some(64));
    assert_eq!(run(&["krein", "--B", "poly:1"]).status.code(), Some(64));
    assert_eq!(run(&["dn", "--gamma", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["audit", "trace_1d", "--gamma", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["dn", "--gamma", "0.5", "--lambda", "2.25", "--M", "1"]).status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_keldysh-disk")).args(["eig"]).env("KELDYSH_THREADS", "0").output().unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn audit_reports_and_summary() {
    let out = run(&["audit", "cm_table", "--gamma", "0:0.5:0.25", "--M", "200"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
    let report = &doc["reports"][1];
    assert_eq!(report["name"], "cm_table");
    assert_eq!(report["parameters"]["gamma"], 0.25);
    assert_eq!(report["data"].as_array().unwrap().len(), 201);
    assert_eq!(report["columns"], serde_json::json!(["m", "c_m", "c_prime_m"]));
}

#[test]
fn config_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let target = dir.path().join("eig.csv");
    std::fs::write(&cfg, format!(r#"{{"gamma": 0.25, "N": 1, "format": "csv", "out": {:?}}}"#, target)).unwrap();
    let out = run(&["eig", "--config", cfg.to_str().unwrap(), "--N", "0"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("2.5000000000000000e-1,0,0,0,"));
    std::fs::write(&cfg, r#"{"gama": 0.25}"#).unwrap();
    assert_eq!(run(&["eig", "--config", cfg.to_str().unwrap()]).status.code(), Some(64));
}

#[test]
fn seeded_runs_repeat_and_seeds_matter() {
    let a = run(&["audit", "coercivity_gamma0", "--seed", "3", "--N", "12"]);
    let b = run(&["audit", "coercivity_gamma0", "--seed", "3", "--N", "12"]);
    let c = run(&["audit", "coercivity_gamma0", "--seed", "4", "--N", "12"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}
