use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn conedet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conedet")).args(args).env_remove("CONEDET_SEED").output().unwrap()
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let out = conedet(args);
    let code = out.status.code().unwrap();
    let v = if out.stdout.is_empty() { Value::Null } else { serde_json::from_slice(&out.stdout).unwrap() };
    (code, v)
}

fn path(name: &str) -> String {
    fixture(name).display().to_string()
}

fn re(v: &Value) -> f64 {
    v["re"].as_f64().unwrap()
}

#[test]
fn validate_exit_codes() {
    let (code, v) = run_json(&["validate", &path("friedrichs_half.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["is_lagrangian"], true);

    let out = conedet(&["validate", &path("not_hermitian.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Hermitian"));

    let out = conedet(&["validate", &path("malformed.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());

    let out = conedet(&["validate", &path("does_not_exist.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_an_input_error() {
    assert_eq!(conedet(&["det", &path("neumann.json"), "--bogus"]).status.code(), Some(2));
    assert_eq!(conedet(&["det", &path("neumann.json"), "--method", "nope"]).status.code(), Some(2));
}

#[test]
fn det_neumann_file() {
    let (code, v) = run_json(&["det", &path("neumann.json"), "--reproducible"]);
    assert_eq!(code, 0);
    let (_, n) = run_json(&["det", &path("neumann.json"), "--method", "neumann", "--reproducible"]);
    let (a, b) = (re(&v["results"]["value"]), re(&n["results"]["value"]));
    assert!((a - b).abs() <= 1e-12 * b.abs());
    assert!(v["residuals"]["ratio_times_neumann"].as_f64().unwrap() <= 1e-12);
    assert!(v["results"]["f0"].is_object());

    let (_, r) = run_json(&["det", &path("neumann.json"), "--method", "ratio"]);
    assert!((re(&r["results"]["value"]) - 1.0).abs() < 1e-12);
    assert_eq!(r["results"]["is_ratio"], true);
}

#[test]
fn det_one_dimensional_file() {
    let (code, v) = run_json(&["det", &path("oned_dirichlet_log.json")]);
    assert_eq!(code, 0);
    let want = (2.0 * std::f64::consts::PI * 2.0).sqrt();
    assert!((re(&v["results"]["value"]) - want).abs() < 1e-13 * want);
    assert!((re(&v["results"]["det_full"]) - 2.0 * want).abs() < 1e-13 * want);
    let (code, o) = run_json(&["det", &path("oned_dirichlet_log.json"), "--method", "oned"]);
    assert_eq!(code, 0);
    assert!((re(&o["results"]["value"]) - want).abs() < 1e-13 * want);
}

#[test]
fn det_kernel_file_exits_3() {
    let out = conedet(&["det", &path("kernel.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kernel"));
}

#[test]
fn det_structure_mismatch_exits_1() {
    assert_eq!(conedet(&["det", &path("mixed.json"), "--method", "neumann"]).status.code(), Some(1));
    assert_eq!(conedet(&["det", &path("mixed.json"), "--method", "oned"]).status.code(), Some(1));
    assert_eq!(conedet(&["det", &path("mixed.json"), "--method", "decomposable"]).status.code(), Some(1));
}

#[test]
fn det_oracle_matches_general() {
    let (_, g) = run_json(&["det", &path("mixed.json")]);
    let (code, o) = run_json(&["det", &path("mixed.json"), "--method", "oracle", "--t", "0.1"]);
    assert_eq!(code, 0);
    let (a, b) = (re(&g["results"]["value"]), re(&o["results"]["value"]));
    assert!((a - b).abs() <= 1e-5 * a.abs());
}

#[test]
fn singularities_examples() {
    let (code, v) = run_json(&["singularities", &path("friedrichs_half.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["poles"].as_array().unwrap().len(), 0);
    assert_eq!(v["results"]["logs"].as_array().unwrap().len(), 0);
    assert_eq!(v["results"]["log_branch_coeff_at_0"], 0);

    let (_, v) = run_json(&["singularities", &path("kernel.json")]);
    assert_eq!(v["results"]["log_branch_coeff_at_0"], -1);

    let (_, v) = run_json(&["singularities", &path("neumann.json")]);
    assert!(v["results"]["poles"].as_array().unwrap().is_empty());
    assert!(v["results"]["logs"].as_array().unwrap().is_empty());

    let (code, v) = run_json(&["singularities", &path("mixed.json"), "-N", "1", "-M", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["truncation"]["N"], 1.0);
    assert!(v["results"]["logs"].as_array().unwrap().iter().all(|e| e["xi"].as_f64().unwrap() <= 1.0));
}

#[test]
fn singularities_text_table() {
    let out = conedet(&["singularities", &path("mixed.json"), "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pole"));
    assert!(text.contains("log_branch_coeff_at_0"));
}

#[test]
fn spectrum_examples() {
    let (code, v) = run_json(&["spectrum", &path("friedrichs_half.json"), "-k", "3"]);
    assert_eq!(code, 0);
    let ev: Vec<f64> = v["results"]["eigenvalues"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(ev.len(), 3);
    for (k, e) in ev.iter().enumerate() {
        let want = ((k + 1) as f64 * std::f64::consts::PI).powi(2);
        assert!((e - want).abs() <= 1e-9 * want);
    }

    let (_, v) = run_json(&["spectrum", &path("friedrichs_q0.json"), "-k", "2"]);
    let ev = v["results"]["eigenvalues"].as_array().unwrap();
    let j01 = 2.404_825_557_695_773f64;
    assert!((ev[0].as_f64().unwrap() - j01 * j01).abs() < 1e-8 * j01 * j01);

    let (code, v) = run_json(&["spectrum", &path("kernel.json"), "-k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["kernel"]["eigenvalue"], 0.0);
    assert_eq!(v["results"]["eigenvalues"][0], 0.0);
}

#[test]
fn verify_battery() {
    for f in ["neumann.json", "mixed.json", "friedrichs_half.json"] {
        let (code, v) = run_json(&["verify", &path(f)]);
        assert_eq!(code, 0, "{f}: {v}");
        assert_eq!(v["results"]["all_passed"], true);
    }
    let (code, v) = run_json(&["verify", &path("kernel.json")]);
    assert_eq!(code, 0);
    let checks = v["results"]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "contour_oracle" && c["status"] == "skip"));
}

#[test]
fn verify_uses_seed_env() {
    let run = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_conedet"))
            .args(["verify", &path("mixed.json"), "--reproducible"])
            .env("CONEDET_SEED", seed)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        serde_json::from_slice::<Value>(&out.stdout).unwrap()
    };
    assert_eq!(run("7")["results"]["seed"], 7);
    let bad = Command::new(env!("CARGO_BIN_EXE_conedet"))
        .args(["verify", &path("mixed.json")])
        .env("CONEDET_SEED", "x")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn reproducible_reports_are_byte_identical() {
    let args = ["det", &path("mixed.json"), "--reproducible"];
    let a = conedet(&args).stdout;
    let b = conedet(&args).stdout;
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert!(v.get("timestamp").is_none());
    let v: Value = serde_json::from_slice(&conedet(&["det", &path("mixed.json")]).stdout).unwrap();
    assert!(v["timestamp"].is_u64());
}

#[test]
fn file_overrides_via_flags() {
    let dir = tempfile::tempdir().unwrap();
    let copy = dir.path().join("p.json");
    std::fs::copy(fixture("mixed.json"), &copy).unwrap();
    let (_, from_file) = run_json(&["spectrum", copy.to_str().unwrap()]);
    assert_eq!(from_file["results"]["requested"], 4);
    let (_, flag) = run_json(&["spectrum", copy.to_str().unwrap(), "-k", "2"]);
    assert_eq!(flag["results"]["requested"], 2);
    assert_eq!(flag["command"]["flags"]["k"], "2");
}
