use std::process::{Command, Output};

use serde_json::Value;

fn wehrl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wehrl")).args(args).env_remove("WEHRL_SEED").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = wehrl(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn spectrum_examples() {
    let r = json(&["spectrum", "--n", "2", "--m", "1", "--k", "1", "--state", "coherent"]);
    assert_eq!(r["schema"], "wehrl-report/1");
    assert!(close(&floats(&r["result"]["values"]), &[2.0, 1.0, 0.0], 1e-12));
    assert!(r["result"]["max_deviation"].as_f64().unwrap() <= 1e-10);

    let r = json(&["spectrum", "--n", "2", "--m", "0", "--k", "0"]);
    assert!(close(&floats(&r["result"]["values"]), &[1.0], 1e-15));

    let r = json(&["spectrum", "--n", "3", "--m", "1", "--k", "2", "--state", "random", "--seed", "4"]);
    assert!((r["result"]["sum"].as_f64().unwrap() - 20.0).abs() < 1e-10);
    assert!(r["result"]["max_deviation"].is_null());
}

#[test]
fn majorize_examples() {
    let r = json(&["majorize", "--n", "2", "--m", "2", "--k", "1", "--trials", "1000", "--seed", "7"]);
    assert_eq!(r["result"]["violations"], 0);
    assert_eq!(r["result"]["trials"].as_array().unwrap().len(), 1000);

    let r = json(&["majorize", "--n", "2", "--m", "2", "--k", "1", "--trials", "1", "--state", "coherent"]);
    assert_eq!(r["result"]["trials"][0]["verdict"], "equal");
    assert!(r["result"]["min_margin_non_coherent"].is_null());

    let r = json(&["majorize", "--n", "3", "--m", "2", "--k", "2", "--trials", "200"]);
    assert_eq!(r["result"]["violations"], 0);
    assert!(r["result"]["min_margin_non_coherent"].as_f64().unwrap() > 0.0);
}

#[test]
fn majorize_is_reproducible_across_runs() {
    let args = ["majorize", "--n", "3", "--m", "2", "--k", "1", "--trials", "50", "--seed", "11"];
    assert_eq!(json(&args)["result"], json(&args)["result"]);
}

#[test]
fn verify_checks() {
    let r = json(&["verify", "--n", "2", "--m", "2", "--k", "1", "--check", "gram,trace,irreducible,identity"]);
    assert_eq!(r["passed"], true);
    let checks = &r["result"]["checks"];
    assert!(checks["gram"]["max_spectral_mismatch"].as_f64().unwrap() <= 1e-9);
    assert!((checks["trace"]["ratio"].as_f64().unwrap() - 4.0).abs() < 1e-10);
    assert_eq!(checks["irreducible"]["commutant_dimension"], 1);
    assert!(close(&floats(&checks["identity"]["constants"]), &[1.0, 1.0], 1e-8));

    let r = json(&["verify", "--n", "3", "--m", "2", "--k", "1", "--check", "defect,resolution", "--samples", "20000"]);
    assert_eq!(r["passed"], true);
}

#[test]
fn entropy_examples() {
    let value = |args: &[&str]| json(args)["result"]["value"].as_f64().unwrap();
    assert!((value(&["entropy", "--n", "2", "--m", "1", "--method", "closed-form"]) - 0.25).abs() < 1e-12);
    let mixed = value(&["entropy", "--n", "2", "--m", "1", "--state", "mixed"]);
    assert!((mixed - core::f64::consts::LN_2 / 2.0).abs() < 1e-12);
    assert!((value(&["entropy", "--n", "2", "--m", "1", "--f", "const:0.7"]) - 0.7).abs() < 1e-12);

    let r = json(&["entropy", "--n", "2", "--m", "2", "--state", "random:5", "--samples", "50000"]);
    assert_eq!(r["result"]["method"], "mc");
    let gap = r["result"]["gap"].as_f64().unwrap();
    assert!(gap >= -3.0 * r["result"]["stderr"].as_f64().unwrap());
}

#[test]
fn limit_scan_csv() {
    let out = wehrl(&["limit-scan", "--n", "2", "--m", "1", "--ks", "0,1,10,100"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "k,finite_trace,limit_value,gap,gap_non_increasing");
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 4);
    let k1: f64 = rows[1][1].parse().unwrap();
    assert!((k1 - core::f64::consts::LN_2 / 6.0).abs() < 1e-12);
    assert!(rows[1..].iter().all(|r| r[4] == "true"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("# config:"));
}

#[test]
fn limit_scan_skips_oversized_k() {
    let r = json(&["limit-scan", "--n", "2", "--m", "1", "--ks", "1,100000000", "--format", "json"]);
    assert_eq!(r["result"]["rows"].as_array().unwrap().len(), 1);
    assert_eq!(r["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| wehrl(args).status.code().unwrap();
    assert_eq!(code(&["spectrum", "--n", "2"]), 2);
    assert_eq!(code(&["spectrum", "--n", "2", "--m", "1", "--state", "thermal"]), 2);
    assert_eq!(code(&["entropy", "--n", "2", "--m", "1", "--f", "power:2"]), 2);
    assert_eq!(code(&["verify", "--n", "2", "--m", "1", "--check", "bogus"]), 2);
    assert_eq!(code(&["entropy", "--n", "2", "--m", "2", "--state", "random", "--method", "closed-form"]), 2);
    assert_eq!(code(&["spectrum", "--n", "5", "--m", "30", "--k", "4"]), 3);
    assert_eq!(code(&["spectrum", "--n", "2", "--m", "3", "--max-dim", "3"]), 3);
    // an unmeetable threshold fails the check, not the run
    assert_eq!(code(&["verify", "--n", "2", "--m", "1", "--check", "resolution", "--samples", "10", "--tol", "0"]), 1);
}

#[test]
fn config_file_and_seed_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"n": 2, "m": 2, "k": 1, "trials": 5, "seed": 21}"#).unwrap();
    let cfg = cfg.to_str().unwrap();

    let r = json(&["majorize", "--config", cfg]);
    assert_eq!(r["config"]["seed"], 21);
    assert_eq!(r["config"]["seed_source"], "config");
    let r = json(&["majorize", "--config", cfg, "--trials", "3", "--seed", "4"]);
    assert_eq!((r["config"]["trials"].as_u64(), r["config"]["seed"].as_u64()), (Some(3), Some(4)));

    let out = Command::new(env!("CARGO_BIN_EXE_wehrl"))
        .args(["majorize", "--n", "2", "--m", "1", "--trials", "2"])
        .env("WEHRL_SEED", "99")
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((r["config"]["seed"].as_u64(), r["config"]["seed_source"].as_str()), (Some(99), Some("env")));

    // a saved report re-runs to the same result
    let saved = dir.path().join("report.json");
    let first = wehrl(&["majorize", "--config", cfg, "--output", saved.to_str().unwrap()]);
    assert!(first.status.success() && first.stdout.is_empty());
    // its output path is not inherited, so the replay prints instead of overwriting
    let again = json(&["majorize", "--config", saved.to_str().unwrap()]);
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(&saved).unwrap()).unwrap();
    assert_eq!(again["result"], stored["result"]);
}

#[test]
fn csv_to_file_writes_config_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let status = wehrl(&["limit-scan", "--n", "3", "--m", "1", "--k-max", "8", "--output", out.to_str().unwrap()]).status;
    assert!(status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 1 + 5);
    let sidecar: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("scan.csv.config.json")).unwrap()).unwrap();
    assert_eq!(sidecar["ks"], serde_json::json!([0, 1, 2, 4, 8]));
}

#[test]
fn spec_style_examples() {
    let r = json(&["spectrum", "--n", "3", "--m", "1", "--k", "2", "--state", "coherent"]);
    assert!((r["result"]["sum"].as_f64().unwrap() - 20.0).abs() < 1e-10);

    let r = json(&["verify", "--check", "gram", "--n", "3", "--m", "2", "--k", "2", "--trials", "50"]);
    assert!(r["result"]["checks"]["gram"]["max_spectral_mismatch"].as_f64().unwrap() <= 1e-9);
    let r = json(&["verify", "--check", "trace", "--n", "2", "--m", "1", "--k", "1"]);
    assert!((r["result"]["checks"]["trace"]["ratio"].as_f64().unwrap() - 3.0).abs() <= 1e-10);
    let r = json(&["verify", "--check", "irreducible", "--n", "3", "--m", "2"]);
    assert_eq!(r["result"]["checks"]["irreducible"]["commutant_dimension"], 1);
}

#[test]
fn limit_scan_rows() {
    let r = json(&["limit-scan", "--n", "2", "--m", "1", "--ks", "0,50,200", "--format", "json"]);
    let rows = r["result"]["rows"].as_array().unwrap();
    // k = 0: (f(1) + (dim - 1) f(0)) / dim with f(0) = f(1) = 0
    assert_eq!(rows[0]["finite_trace"].as_f64().unwrap(), 0.0);
    assert!(rows[2]["gap"].as_f64().unwrap().abs() <= 0.01);
    assert!(rows.iter().all(|row| (row["limit_value"].as_f64().unwrap() - 0.25).abs() < 1e-12));

    // a table f with f(1) != 0 makes the k = 0 row nontrivial
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("f.csv");
    std::fs::write(&table, "0,0.1\n0.5,0.6\n1,0.8\n").unwrap();
    let spec = format!("table:{}", table.display());
    let r = json(&["limit-scan", "--n", "3", "--m", "1", "--f", &spec, "--ks", "0", "--format", "json"]);
    let k0 = r["result"]["rows"][0]["finite_trace"].as_f64().unwrap();
    assert!((k0 - (0.8 + 2.0 * 0.1) / 3.0).abs() < 1e-14);
}

#[test]
fn reports_match_published_schema() {
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let runs: [&[&str]; 6] = [
        &["spectrum", "--n", "3", "--m", "1", "--k", "2", "--state", "coherent"],
        &["spectrum", "--n", "2", "--m", "2", "--k", "1", "--state", "density:3"],
        &["majorize", "--n", "2", "--m", "2", "--k", "1", "--trials", "20"],
        &["verify", "--n", "2", "--m", "1", "--k", "1", "--trials", "5", "--samples", "2000"],
        &["entropy", "--n", "2", "--m", "2", "--state", "random", "--samples", "5000"],
        &["limit-scan", "--n", "2", "--m", "1", "--format", "json"],
    ];
    for args in runs {
        let report = json(args);
        let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }

    let mut broken = json(runs[2]);
    broken["result"]["trials"][0]["verdict"] = "maybe".into();
    assert!(!validator.is_valid(&broken));
    broken = json(runs[0]);
    broken["config"]["format"] = "xml".into();
    assert!(!validator.is_valid(&broken));
}
