use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_indiff"))
}

fn write_config(dir: &Path, cfg: &Value) -> PathBuf {
    let path = dir.join("run.json");
    std::fs::write(&path, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    path
}

fn run(dir: &Path, sub: &str, cfg: &Value, extra: &[&str]) -> Output {
    let path = write_config(dir, cfg);
    let out = dir.join("out");
    bin().arg(sub).arg("--config").arg(&path).arg("--out").arg(&out).args(extra).output().unwrap()
}

fn read_csv(path: &Path) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|x| x.unwrap()).collect()
}

fn column(path: &Path, name: &str) -> Vec<String> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let idx = r.headers().unwrap().iter().position(|h| h == name).unwrap();
    r.records().map(|x| x.unwrap()[idx].to_owned()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn factor(alpha: Value, family: Value) -> Value {
    json!({ "kind": "factor", "horizon": 1.0, "alpha": alpha, "family": family })
}

fn diffusion_family(b: f64, s2: f64, sensitivity: f64) -> Value {
    json!({ "kind": "affine_drift", "sensitivity": sensitivity, "base": { "drift": b, "sigma2": s2 } })
}

fn one_node() -> Value {
    json!({ "kind": "atoms", "atoms": [[0.0, 1.0]] })
}

#[test]
fn pure_diffusion_solves_to_single_row() {
    let dir = TempDir::new().unwrap();
    let cfg = json!({
        "schema_version": 1,
        "model": factor(one_node(), diffusion_family(0.1, 0.04, 0.0)),
        "utility": { "kind": "log" }
    });
    let out = run(dir.path(), "solve-measure", &cfg, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let beta = column(&dir.path().join("out/solve_measure.csv"), "beta");
    assert_eq!(beta.len(), 1);
    assert!((num(&beta[0]) + 2.5).abs() < 1e-12);
}

#[test]
fn affine_drift_gives_monotone_betas() {
    let dir = TempDir::new().unwrap();
    let alpha = json!({ "kind": "atoms", "atoms": [[-1.0, 0.3], [0.0, 0.4], [1.0, 0.3]] });
    let family = json!({
        "kind": "affine_drift",
        "sensitivity": 0.05,
        "base": { "drift": 0.05, "sigma2": 0.04, "measure": { "kind": "atoms", "atoms": [[0.3, 1.0]] } }
    });
    let cfg = json!({ "schema_version": 1, "model": factor(alpha, family), "utility": { "kind": "power", "p": 0.5 } });
    let out = run(dir.path(), "solve-measure", &cfg, &[]);
    assert!(out.status.success());
    let beta: Vec<f64> = column(&dir.path().join("out/solve_measure.csv"), "beta").iter().map(|s| num(s)).collect();
    assert_eq!(beta.len(), 3);
    assert!(beta[0] > beta[1] && beta[1] > beta[2], "{beta:?}");
}

#[test]
fn no_sign_change_exits_with_input_error() {
    let dir = TempDir::new().unwrap();
    let family = json!({
        "kind": "affine_drift",
        "sensitivity": 0.0,
        "base": { "drift": 1.0, "sigma2": 0.0, "measure": { "kind": "atoms", "atoms": [[0.5, 1.0]] } }
    });
    let cfg = json!({ "schema_version": 1, "model": factor(one_node(), family), "utility": { "kind": "log" } });
    let out = run(dir.path(), "solve-measure", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sign"));
}

#[test]
fn constant_payoff_prices_at_its_value() {
    let dir = TempDir::new().unwrap();
    let alpha = json!({ "kind": "atoms", "atoms": [[0.0, 0.5], [1.0, 0.5]] });
    for utility in [json!({ "kind": "log" }), json!({ "kind": "power", "p": -2.0 }), json!({ "kind": "exp", "gamma": 3.0 })] {
        let cfg = json!({
            "schema_version": 1,
            "model": factor(alpha.clone(), diffusion_family(0.08, 0.05, 0.1)),
            "utility": utility,
            "capital": 2.0,
            "payoff": { "kind": "constant", "value": 0.7 }
        });
        let out = run(dir.path(), "price", &cfg, &[]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let summary = dir.path().join("out/price_summary.csv");
        for side in ["p_buyer", "p_seller"] {
            assert!((num(&column(&summary, side)[0]) - 0.7).abs() < 1e-8);
        }
    }
}

#[test]
fn exp_two_node_example() {
    let dir = TempDir::new().unwrap();
    // Identical conditional models give a constant I_T across nodes.
    let triplet = json!({ "drift": 0.05, "sigma2": 0.04 });
    let family = json!({ "kind": "tabulated", "rows": [{ "u": 0.0, "triplet": triplet }, { "u": 1.0, "triplet": triplet }] });
    let cfg = json!({
        "schema_version": 1,
        "model": factor(json!({ "kind": "atoms", "atoms": [[0.0, 0.5], [1.0, 0.5]] }), family),
        "utility": { "kind": "exp", "gamma": 1.0 },
        "capital": 1.0,
        "payoff": { "kind": "tabulated", "values": [0.0, std::f64::consts::LN_2] }
    });
    let out = run(dir.path(), "price", &cfg, &["--format", "jsonl"]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("out/price_summary.jsonl")).unwrap();
    let row: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(row["schema_version"], 1);
    assert_eq!(row["table"], "price_summary");
    assert!((row["p_buyer"].as_f64().unwrap() + 0.75f64.ln()).abs() < 1e-12);
}

#[test]
fn log_payoff_above_capital_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = json!({
        "schema_version": 1,
        "model": factor(json!({ "kind": "atoms", "atoms": [[0.0, 0.5], [1.0, 0.5]] }), diffusion_family(0.1, 0.04, 0.0)),
        "utility": { "kind": "log" },
        "capital": 1.0,
        "payoff": { "kind": "tabulated", "values": [0.5, 1.0] }
    });
    let out = run(dir.path(), "price", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("payoff"));
}

#[test]
fn zero_beta_model_verifies_exactly() {
    let dir = TempDir::new().unwrap();
    let cfg = json!({
        "schema_version": 1,
        "model": factor(one_node(), diffusion_family(0.0, 0.04, 0.0)),
        "oracle": { "n_paths": 2000, "seed": 3, "quantities": ["martingale", "entropy_pq", "kl_qp"] }
    });
    let out = run(dir.path(), "verify", &cfg, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.path().join("out/verify.csv");
    let status = column(&path, "status");
    assert!(status.iter().all(|s| s == "pass"));
    for (quantity, estimate) in column(&path, "quantity").iter().zip(column(&path, "estimate")) {
        if quantity == "entropy_pq" || quantity == "kl_qp" {
            assert_eq!(num(&estimate), 0.0);
        }
    }
    assert!(dir.path().join("out/ledger.csv").exists());
}

#[test]
fn paper_literal_mode_is_flagged() {
    let dir = TempDir::new().unwrap();
    let family = json!({
        "kind": "affine_drift",
        "sensitivity": 0.0,
        "base": { "drift": 0.05, "sigma2": 0.0, "measure": { "kind": "atoms", "atoms": [[0.5, 1.0]] } }
    });
    let cfg = json!({
        "schema_version": 1,
        "model": factor(one_node(), family),
        "utility": { "kind": "exp", "gamma": 1.0 },
        "oracle": { "n_paths": 20000, "seed": 9, "quantities": ["martingale"] }
    });
    let ok = run(dir.path(), "verify", &cfg, &[]);
    assert_eq!(ok.status.code(), Some(0));
    let literal = run(dir.path(), "verify", &cfg, &["--mode", "paper-literal"]);
    assert_eq!(literal.status.code(), Some(1));
    let notes = column(&dir.path().join("out/ledger.csv"), "note");
    assert!(notes.iter().any(|n| n.contains("not a martingale measure")));
}

#[test]
fn gbm_verify_writes_ledger() {
    let dir = TempDir::new().unwrap();
    let cfg = json!({
        "schema_version": 1,
        "model": { "kind": "gbm", "mu1": 0.2, "sigma1": 1.0, "rho": 0.0, "horizon": 1.0, "claim_horizon": 2.0 },
        "oracle": { "n_paths": 4000, "n_steps": 100, "seed": 1, "hellinger_orders": [0.5] }
    });
    let out = run(dir.path(), "verify", &cfg, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let ledger = dir.path().join("out/ledger.csv");
    let items = column(&ledger, "item");
    let params = column(&ledger, "parameter");
    assert!(items.iter().zip(&params).any(|(i, q)| i == "gbm_hellinger" && q == "0.0"));
    assert!(items.iter().any(|i| i == "gbm_entropy_sign"));
    assert!(items.iter().any(|i| i == "gbm_density_sign"));
}

#[test]
fn riskprops_passes_for_exp() {
    let dir = TempDir::new().unwrap();
    let alpha = json!({ "kind": "atoms", "atoms": [[0.0, 0.5], [1.0, 0.5]] });
    let family = json!({
        "kind": "intensity_scaled",
        "rate": 0.5,
        "base": { "drift": 0.05, "sigma2": 0.02, "measure": { "kind": "atoms", "atoms": [[0.2, 1.0], [-0.1, 2.0]] } }
    });
    let cfg = json!({
        "schema_version": 1,
        "model": factor(alpha, family),
        "utility": { "kind": "exp", "gamma": 2.0 },
        "capital": 1.0,
        "risk": { "trials": 100, "tol": 1e-9, "seed": 4 }
    });
    let out = run(dir.path(), "riskprops", &cfg, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_csv(&dir.path().join("out/riskprops.csv"));
    assert_eq!(rows.len(), 7);
    assert!(column(&dir.path().join("out/riskprops.csv"), "status").iter().all(|s| s == "pass"));
}

#[test]
fn bad_inputs_exit_with_code_two() {
    let dir = TempDir::new().unwrap();
    let missing = bin().arg("info").arg("--config").arg(dir.path().join("absent.json")).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
    let no_config = bin().arg("info").output().unwrap();
    assert_eq!(no_config.status.code(), Some(2));
    let cfg = json!({ "schema_version": 1, "model": factor(one_node(), diffusion_family(0.1, 0.04, 0.0)) });
    let out = run(dir.path(), "price", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("utility"));
}

#[test]
fn stdout_report_when_no_out_dir() {
    let dir = TempDir::new().unwrap();
    let cfg = json!({
        "schema_version": 1,
        "model": factor(one_node(), diffusion_family(0.1, 0.04, 0.0)),
        "utility": { "kind": "exp", "gamma": 1.0 }
    });
    let path = write_config(dir.path(), &cfg);
    let out = bin().arg("info").arg("--config").arg(&path).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# info\nschema_version,u,"));
}
