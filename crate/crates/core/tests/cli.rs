use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smallgens")).args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn bound_example() {
    let out = run(&["bound", "--variant", "congruence", "--d", "1", "--vol", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["config", "results", "timings", "versions", "violations"]);
    let b = &r["results"]["reports"][0];
    assert_eq!(b["base_exponent"]["value"]["exact"], "384/5");
    assert_eq!(b["vol_exponent"]["value"]["exact"], "192/25");
}

#[test]
fn window_example_with_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    let out = run(&["window", "--d", "2", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let w = &report(&out)["results"]["windows"][0]["window"];
    assert_eq!(w["lower"]["decimal"], "1.414213562e0");
    assert_eq!(w["upper"]["decimal"], "2.000000668e0");
    let text = read(&csv);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("d,lower,upper,elliptic_max,elliptic_max_m,delta0,voutier_2d"));
    assert!(lines.next().unwrap().starts_with("2,1.414213562e0,2.000000668e0,"));
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let again = dir.path().join("again.json");
    let out = run(&["trace-census", "--a", "2", "--b", "3", "--cap", "10", "--out", first.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let out = run(&["--config", first.to_str().unwrap(), "--out", again.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read(&first), read(&again));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.json");
    std::fs::write(&cfg, r#"{"command":"window","d":2}"#).unwrap();
    let r = report(&run(&["--config", cfg.to_str().unwrap(), "--d", "3"]));
    assert_eq!(r["config"]["d"], 3);
    assert_eq!(r["results"]["windows"][0]["d"], 3);
}

#[test]
fn bad_input_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.json");
    std::fs::write(&cfg, r#"{"command":"window","d":2,"depth":3}"#).unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap()]).status.code(), Some(4));
    assert_eq!(run(&["window", "--unknown"]).status.code(), Some(4));
    assert_eq!(run(&["bound", "--d", "2", "--vol", "1"]).status.code(), Some(4));
    assert_eq!(run(&["hilbert", "--a", "1/0", "--b", "3"]).status.code(), Some(4));
}

#[test]
fn violations_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.json");
    std::fs::write(
        &cfg,
        r#"{"command":"trace-census","cap":6,"algebra":{"a":3,"b":-1,
            "order_basis":[[1,0,0,0],[0,1,0,0],[0,0,1,0],["1/2","1/2","1/2","1/2"]]}}"#,
    )
    .unwrap();
    let out = run(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!report(&out)["violations"].as_array().unwrap().is_empty());
}

#[test]
fn norm_six_generators_are_inconclusive() {
    let out = run(&["generators", "--a", "2", "--b", "3", "--gen-cap", "6", "--target-cap", "50", "--node-cap", "2000"]);
    assert_eq!(out.status.code(), Some(3));
    let r = report(&out);
    assert_eq!(r["results"]["status"], "inconclusive");
    assert_eq!(r["results"]["certificate"]["certified"], 421);
}

#[test]
fn csv_rejected_for_scalar_commands() {
    assert_eq!(run(&["safety-constant", "--d-max", "10", "--csv", "x.csv"]).status.code(), Some(4));
}
