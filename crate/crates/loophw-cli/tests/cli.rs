//! End-to-end tests of the binary: exit codes, output formats, JSON round
//! trips and deterministic reports.

use std::process::{Command, Output};

use loophw::{HwReport, NetworkGraph, Rat};

fn loophw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loophw"))
        .args(args)
        .env_remove("LOOPHW_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn analyze_weyl_is_reducible() {
    let out = loophw(&["analyze", "--params", "2:2,3:1", "--construct", "weyl"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("module dim:  8"), "{text}");
    assert!(text.contains("REDUCIBLE"), "{text}");
    assert!(text.contains("1 - 7 u + 16 u^2 - 12 u^3"), "{text}");
}

#[test]
fn analyze_packed_is_irreducible() {
    let out = loophw(&["analyze", "--params", "2:2,3:1", "--construct", "packed"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("module dim:  6"), "{text}");
    assert!(text.contains("IRREDUCIBLE"), "{text}");
}

#[test]
fn analyze_fundamental_defaults() {
    let out = loophw(&["analyze", "--params", "2:1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("module dim:  2"), "{text}");
    assert!(text.contains("IRREDUCIBLE"), "{text}");
}

#[test]
fn analyze_json_roundtrip() {
    let out = loophw(&[
        "analyze",
        "--params",
        "2:2,3:1",
        "--construct",
        "weyl",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let report = HwReport::<Rat>::from_json(&value).unwrap();
    assert_eq!(report.to_json(), value);
    assert_eq!(report.actual_dim, 8);
    assert!(!report.criterion_holds);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["analyze"],
        vec!["analyze", "--params", "0:1"],
        vec!["analyze", "--params", "2:2,2:1"],
        vec!["analyze", "--params", "2:x"],
        vec!["analyze", "--params", "2:1", "--format", "yaml"],
        vec!["analyze", "--params", "2:1", "--construct", "mystery"],
        vec!["network", "--params", "2:1,3:1", "--cut", "∅"],
        vec!["network", "--params", "2:2,3:1", "--cut", "7^1"],
        vec!["frobnicate"],
    ] {
        let out = loophw(&args);
        assert_eq!(out.status.code(), Some(1), "args {args:?}");
    }
}

#[test]
fn cap_is_enforced_via_flag_and_env() {
    let out = loophw(&["analyze", "--params", "2:3,3:3", "--cap", "32"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("dimension cap exceeded"), "{err}");

    let out = Command::new(env!("CARGO_BIN_EXE_loophw"))
        .args(["analyze", "--params", "2:3,3:3"])
        .env("LOOPHW_CAP", "32")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn network_text_and_cut() {
    let out = loophw(&[
        "network",
        "--params",
        "2:3,3:3",
        "--cut",
        "1^1, 1^2 2^2, 2^2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("total quotient dim: 64"), "{text}");
    assert!(text.contains("cut module dim: 24"), "{text}");
}

#[test]
fn network_json_roundtrip() {
    let out = loophw(&["network", "--params", "2:5,3:1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let graph = NetworkGraph::<Rat>::from_json(&value).unwrap();
    let mut expected = value.clone();
    expected.as_object_mut().unwrap().remove("cut_dim");
    assert_eq!(graph.to_json(), expected);
    assert_eq!(graph.total_quotient_dim(), 64);
    // the two vanished vertices carry conjecture explanations
    let vanished: Vec<&serde_json::Value> = value["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["vanished"].as_bool().unwrap())
        .collect();
    assert_eq!(vanished.len(), 2);
    for v in vanished {
        assert!(v["explained"].is_object(), "{v}");
    }
}

#[test]
fn network_dot_output() {
    let out = loophw(&["network", "--params", "2:5,3:1", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("digraph network {"), "{text}");
    assert!(
        text.contains("style=dashed"),
        "dashed vanished nodes: {text}"
    );
    assert!(text.contains("label=\"iii\""), "{text}");
    assert!(text.trim_end().ends_with('}'), "{text}");
}

#[test]
fn network_predicted_only() {
    let out = loophw(&["network", "--params", "2:3,3:3", "--predicted"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("exact = -"), "{text}");
    assert!(text.contains("total quotient dim: 64"), "{text}");
}

#[test]
fn network_jobs_agree() {
    let a = loophw(&["network", "--params", "2:2,3:2", "--format", "json"]);
    let b = loophw(&[
        "network", "--params", "2:2,3:2", "--format", "json", "--jobs", "3",
    ]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn verify_small_zoo_passes() {
    let out = loophw(&["verify", "--cap", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("0 failed"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn verify_accepts_window_and_seed() {
    let out = loophw(&["verify", "--cap", "8", "--window", "3", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 failed"));
}

#[test]
fn verify_rejects_zero_parameter() {
    let out = loophw(&["verify", "--params", "0:1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn examples_reproduce_tables() {
    let out = loophw(&["examples"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.matches("PASS").count(), 10, "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn module_spec_file_drives_analyze() {
    let dir = std::env::temp_dir().join("loophw-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("module.json");
    std::fs::write(
        &path,
        r#"{"factors":[{"a":"2","m":1},{"a":"2","m":1},{"a":"3","m":1}],
            "quotient_by":["w:1^1"]}"#,
    )
    .unwrap();
    let out = loophw(&["analyze", "--module-spec", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("module dim:  6"), "{text}");
    assert!(text.contains("IRREDUCIBLE"), "{text}");
}

#[test]
fn params_file_input() {
    let dir = std::env::temp_dir().join("loophw-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("params.json");
    std::fs::write(&path, r#"{"params":[{"a":"2","m":2},{"a":"3","m":1}]}"#).unwrap();
    let out = loophw(&["analyze", "--params-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("module dim:  8"));
}

#[test]
fn text_output_is_deterministic() {
    let a = loophw(&["network", "--params", "2:3,3:3"]);
    let b = loophw(&["network", "--params", "2:3,3:3"]);
    assert_eq!(stdout(&a), stdout(&b));
}
