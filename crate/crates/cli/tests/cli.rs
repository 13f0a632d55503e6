use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dynsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynsym")).args(args).env_remove("DYNSYM_OUT").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report on stdout")
}

#[test]
fn verify_sch_has_zero_residuals() {
    let out = dynsym(&["verify", "--rep", "sch", "--d", "1", "--window", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["config"]["command"], "verify");
    let items = v["result"]["structure"]["items"].as_array().unwrap();
    assert!(!items.is_empty());
    assert!(items.iter().all(|i| i["residual"] == "0"));
}

#[test]
fn casimir_at_three_halves() {
    let out = dynsym(&["casimir", "--x", "3/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["casimir"]["scalar"], "-4*M^2");
}

#[test]
fn critical_temperature_in_one_dimension() {
    let out = dynsym(&["arcetri-tc", "--d", "1", "--tol", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let e = json(&out)["result"]["estimate"]["estimate"].as_f64().unwrap();
    assert!((1.98..=2.02).contains(&e), "{}", e);
}

#[test]
fn symmetry_failure_exits_one() {
    let out = dynsym(&["verify", "--rep", "sch", "--symmetry"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["result"]["symmetry"]["constraints"][0], "x = 1/2");
    let out = dynsym(&["verify", "--rep", "sch", "--symmetry", "--x", "1/2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(dynsym(&["suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(dynsym(&["verify", "--rep", "nonsense"]).status.code(), Some(2));
    assert_eq!(dynsym(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(dynsym(&["hardy", "--xi", "0.25"]).status.code(), Some(2));
}

#[test]
fn algebra_suite_prints_summary() {
    let out = dynsym(&["suite", "algebra"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("algebra.casimir.sch"));
    assert!(text.trim_end().ends_with("suite passed"));
}

#[test]
fn identical_configs_give_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let p = path.to_str().unwrap();
    let args = ["--out", p, "glauber", "--n", "10000", "--s", "5", "--y", "2,3", "--replicas", "4"];
    assert!(dynsym(&args).status.code().is_some());
    let first = std::fs::read(&path).unwrap();
    assert!(dynsym(&args).status.code().is_some());
    assert_eq!(first, std::fs::read(&path).unwrap());
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["config"]["replicas"], 4);
    assert_eq!(v["config"]["seed"], 1);
}

#[test]
fn csv_output_and_env_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dynsym"))
        .args(["--format", "csv", "hardy"])
        .env("DYNSYM_OUT", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("hardy.csv")).unwrap();
    assert!(text.starts_with("xi,quadrature,closed_form,rel_diff\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "command = \"casimir\"\nx = \"5/2\"\nset = [\"M=2\"]\n").unwrap();
    let path = cfg.to_str().unwrap();
    let out = dynsym(&["--config", path]);
    assert_eq!(out.status.code(), Some(0));
    // M^2 (2x-1)(2x-5) at x = 5/2 vanishes
    assert_eq!(json(&out)["result"]["casimir"]["scalar"], "0");
    let out = dynsym(&["--config", path, "casimir", "--x", "1"]);
    let v = json(&out);
    assert_eq!(v["config"]["x"], "1");
    assert_eq!(v["result"]["casimir"]["scalar"], "-12");
}

#[test]
fn missing_config_file_is_a_usage_error() {
    let out = dynsym(&["--config", Path::new("/nonexistent/run.toml").to_str().unwrap(), "hardy"]);
    assert_eq!(out.status.code(), Some(2));
}
