use std::path::Path;
use std::process::{Command, Output};

use pvlab::io::{read_matrix, sidecar_path, Sidecar};

fn pvlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pvlab")).args(args).current_dir(dir).env_remove("SPDE_PV_THREADS").output().unwrap()
}

const SMALL: &str = r#"{
  "name": "small",
  "r": -1.0,
  "truncation": 32,
  "horizon": 0.5,
  "variations": [{"r": -1.0, "kind": "power", "order": 2}, {"r": 0.0, "kind": "power", "order": 4}],
  "delta_grid": {"dyadic": [4, 6]},
  "replicates": 6,
  "seed": 3,
  "holder": {"r": 0.0, "delta_grid": {"dyadic": [6, 9]}, "replicates": 50, "truncation": 256}
}"#;

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("small.json"), SMALL).unwrap();
    dir
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn converge_writes_table_and_sidecars() {
    let dir = setup();
    let o = pvlab(&["converge", "--config", "small.json", "--out", "a"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = dir.path().join("a/small_convergence.csv");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("request,delta,mean_V_at_T,std_error,theoretical_limit,abs_error,sup_error_over_grid"));
    assert_eq!(text.lines().count(), 1 + 2 * 3);
    let side: Sidecar = serde_json::from_str(&std::fs::read_to_string(sidecar_path(&csv)).unwrap()).unwrap();
    assert_eq!(side.spec_hash.len(), 64);
    assert!(side.version.starts_with(env!("CARGO_PKG_VERSION")));
    assert_eq!(side.seed, 3);
    assert!(dir.path().join("a/small_convergence.json.json").exists());
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = setup();
    assert_eq!(code(&pvlab(&["converge", "--config", "small.json", "--out", "one", "--threads", "1"], dir.path())), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_pvlab"))
        .args(["converge", "--config", "small.json", "--out", "two"])
        .current_dir(dir.path())
        .env("SPDE_PV_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let a = std::fs::read(dir.path().join("one/small_convergence.csv")).unwrap();
    let b = std::fs::read(dir.path().join("two/small_convergence.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn seed_flag_changes_results() {
    let dir = setup();
    assert_eq!(code(&pvlab(&["converge", "--config", "small.json", "--out", "a"], dir.path())), 0);
    assert_eq!(code(&pvlab(&["converge", "--config", "small.json", "--out", "b", "--seed", "4"], dir.path())), 0);
    let a = std::fs::read(dir.path().join("a/small_convergence.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/small_convergence.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn missing_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = pvlab(&["converge", "--config", "nowhere.json"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("nowhere.json"));
}

#[test]
fn unknown_flag_prints_usage() {
    let dir = tempfile::tempdir().unwrap();
    let o = pvlab(&["converge", "--bogus"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn out_of_regime_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"r": 0.7}"#).unwrap();
    assert_eq!(code(&pvlab(&["constants", "--config", "bad.json"], dir.path())), 2);
}

#[test]
fn validate_passes_and_detects_corrupted_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = pvlab(&["validate"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(!String::from_utf8_lossy(&o.stdout).contains("FAIL"));
    std::fs::write(
        dir.path().join("table.json"),
        r#"{"entries": [{"r": -1.0, "k_r": 1.7, "constants": [[2, 4.8705]], "tolerance": 1e-4}]}"#,
    )
    .unwrap();
    let o = pvlab(&["validate", "--table", "table.json"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("[FAIL] limit constants vs table"));
}

#[test]
fn constants_report() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.json"), r#"{"name": "crit", "r": -0.5, "orders": [1, 2, 3]}"#).unwrap();
    let o = pvlab(&["constants", "--config", "c.json", "--out", "."], dir.path());
    assert_eq!(code(&o), 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("crit_constants.json")).unwrap()).unwrap();
    assert_eq!(report["regime"], "Critical");
    assert!((report["k_r"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((report["constants_by_order"][2]["value"].as_f64().unwrap() - 0.125).abs() < 1e-12);
}

#[test]
fn simulate_stores_a_readable_path() {
    let dir = setup();
    let o = pvlab(&["simulate", "--config", "small.json", "--out", "s"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (rows, cols, data) = read_matrix(&dir.path().join("s/small_path.bin")).unwrap();
    assert_eq!((rows, cols), (9, 32));
    assert!(data[..32].iter().all(|v| *v == 0.0));
    let norms = std::fs::read_to_string(dir.path().join("s/small_norms.csv")).unwrap();
    assert_eq!(norms.lines().count(), 10);
    assert!(dir.path().join("s/small_norms.csv.json").exists());
}

#[test]
fn variation_and_holder_run() {
    let dir = setup();
    let o = pvlab(&["variation", "--config", "small.json", "--out", "v"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("v/small_variation1.csv").exists());
    let o = pvlab(&["holder", "--config", "small.json", "--out", "h"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let est: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("h/small_holder.json")).unwrap()).unwrap();
    assert_eq!(est["points"].as_array().unwrap().len(), 4);
    assert!((est["slope"].as_f64().unwrap() - 0.25).abs() < 0.1);
}
