//! End-to-end tests of the `aqh` binary: exit codes, output schemas, and the
//! mode/flag contract, exercised through real process invocations.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn aqh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aqh"))
        .args(args)
        .output()
        .expect("failed to launch the binary")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is not UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is not UTF-8")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_str(&stdout_of(out)).expect("stdout is not valid JSON")
}

#[test]
fn single_parameter_table_reports_the_generic_classification() {
    let out = aqh(&["--lambda", "0.75"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("lambda = 0.75"), "missing parameter echo:\n{text}");
    assert!(text.contains("W1+W3"), "missing torsion classes:\n{text}");
    assert!(text.contains("flags"), "missing flag line:\n{text}");
}

#[test]
fn exact_mode_reports_fractions_and_passes_exact_checks() {
    let out = aqh(&["--lambda", "2/3", "--exact", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let doc = json_of(&out);
    assert_eq!(doc["lambda"], Value::String("2/3".into()));
    assert_eq!(doc["mu"], Value::String("3/2".into()));
    assert_eq!(doc["gh_I"][0], "W3");
    assert_eq!(doc["flags"]["kahler"], false);
    assert!(doc["psi3_norm"].as_f64().unwrap() > 1.0);
}

#[test]
fn the_half_parameter_is_flagged_kahler_and_einstein() {
    let out = aqh(&["--lambda", "1/2", "--exact", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["flags"]["kahler"], true);
    assert_eq!(doc["flags"]["einstein"], true);
    assert_eq!(doc["flags"]["quaternionic"], false);
    assert_eq!(doc["gh_I"].as_array().unwrap().len(), 0);
    assert_eq!(doc["nijenhuis"]["NI_norm"], 0.0);
}

#[test]
fn nonpositive_or_malformed_parameters_are_usage_errors() {
    for args in [
        &["--lambda", "0"][..],
        &["--lambda=-1"][..],
        &["--lambda", "abc"][..],
        &["--lambda", "1/0"][..],
    ] {
        let out = aqh(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}: {}", stderr_of(&out));
        assert!(!stderr_of(&out).is_empty(), "usage error must explain itself");
    }
}

#[test]
fn a_mode_flag_is_required_and_modes_are_exclusive() {
    let none = aqh(&[]);
    assert_eq!(none.status.code(), Some(2));

    let two = aqh(&["--lambda", "1", "--selftest"]);
    assert_eq!(two.status.code(), Some(2));

    let log_without_sweep = aqh(&["--lambda", "1", "--log"]);
    assert_eq!(log_without_sweep.status.code(), Some(2));
}

#[test]
fn exact_arithmetic_is_limited_to_the_single_parameter_mode() {
    for args in [
        &["--sweep", "0.4:0.8:3", "--exact"][..],
        &["--selftest", "--exact"][..],
        &["--find-special", "--exact"][..],
        &["--dump-structure", "--exact"][..],
    ] {
        let out = aqh(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
}

#[test]
fn sweeps_need_at_least_two_points_and_a_valid_range() {
    let one = aqh(&["--sweep", "0.5:0.9:1"]);
    assert_eq!(one.status.code(), Some(2));

    let malformed = aqh(&["--sweep", "0.5:0.9"]);
    assert_eq!(malformed.status.code(), Some(2));

    let nonpositive = aqh(&["--sweep", "0:0.9:4"]);
    assert_eq!(nonpositive.status.code(), Some(2));
}

#[test]
fn sweep_json_carries_reports_and_located_special_points() {
    let out = aqh(&["--sweep", "0.45:0.9:5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let doc = json_of(&out);

    let reports = doc["reports"].as_array().expect("reports array");
    assert_eq!(reports.len(), 5);
    assert!((reports[0]["lambda"].as_f64().unwrap() - 0.45).abs() < 1e-12);
    assert!((reports[4]["lambda"].as_f64().unwrap() - 0.9).abs() < 1e-12);

    let special = doc["special_points"].as_array().expect("special_points array");
    let kinds: Vec<&str> = special.iter().map(|p| p["kind"].as_str().unwrap()).collect();
    assert!(kinds.contains(&"kahler"), "kinds: {kinds:?}");
    assert!(kinds.contains(&"eh_zero"), "kinds: {kinds:?}");
    assert!(kinds.contains(&"einstein"), "kinds: {kinds:?}");
    assert!(kinds.contains(&"pure_w1_jk"), "kinds: {kinds:?}");
    for p in special {
        assert!(p["residual"].as_f64().unwrap().abs() < 1e-9);
    }
}

#[test]
fn two_point_sweeps_skip_root_refinement() {
    let out = aqh(&["--sweep", "0.6:0.7:2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["reports"].as_array().unwrap().len(), 2);
    assert_eq!(doc["special_points"].as_array().unwrap().len(), 0);
}

#[test]
fn csv_sweeps_keep_stdout_machine_readable() {
    let out = aqh(&["--sweep", "0.45:0.9:3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));

    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("lambda,mu,psi3_norm"), "header: {}", lines[0]);
    assert_eq!(lines.len(), 4, "one header plus three records:\n{text}");
    for line in &lines[1..] {
        assert!(!line.starts_with('#'), "data row contaminated: {line}");
    }

    let err = stderr_of(&out);
    assert!(err.contains("# special"), "summary missing from stderr: {err}");
    assert!(err.contains("kahler"), "summary incomplete: {err}");
}

#[test]
fn out_flag_redirects_the_report_to_a_file() {
    let path: PathBuf = std::env::temp_dir().join(format!("aqh-out-{}.json", std::process::id()));
    let out = aqh(&["--lambda", "1", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).is_empty(), "stdout should stay clean");

    let written = std::fs::read_to_string(&path).expect("output file");
    let doc: Value = serde_json::from_str(&written).expect("file is JSON");
    assert!(doc["psi3_norm"].as_f64().unwrap() > 0.0);
    std::fs::remove_file(&path).ok();
}

#[test]
fn unwritable_out_path_is_a_usage_error() {
    let out = aqh(&["--lambda", "1", "--out", "/nonexistent-dir/report.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn structure_dump_lists_the_frozen_tables() {
    let out = aqh(&["--dump-structure"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["coframe"].as_array().unwrap().len(), 12);
    assert_eq!(doc["jacobi"], true);
    assert_eq!(doc["reductive"], true);
}

#[test]
fn find_special_locates_all_five_roots_in_the_default_window() {
    let out = aqh(&["--find-special", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "kind,lambda,residual");
    assert_eq!(lines.len(), 6, "expected five roots:\n{text}");
    let kinds: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(
        kinds.iter().filter(|k| **k == "einstein").count(),
        2,
        "two Einstein parameters expected: {kinds:?}"
    );
    assert!(kinds.contains(&"kahler"));
    assert!(kinds.contains(&"eh_zero"));
    assert!(kinds.contains(&"pure_w1_jk"));
}

#[test]
fn selftest_reports_every_check_and_exits_zero() {
    let out = aqh(&["--selftest", "--seed", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let doc = json_of(&out);
    assert_eq!(doc["seed"], 3);
    assert_eq!(doc["all_passed"], true);
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 10);
    for c in checks {
        assert_eq!(c["passed"], true, "failed check: {c}");
    }
}

#[test]
fn repeated_invocations_are_deterministic() {
    let a = aqh(&["--lambda", "0.8", "--format", "csv"]);
    let b = aqh(&["--lambda", "0.8", "--format", "csv"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout_of(&a), stdout_of(&b));
}
