use std::path::PathBuf;
use std::process::{Command, Output};

fn ncy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncy")).args(args).output().expect("binary runs")
}

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn sextic_n3_passes() {
    let o = ncy(&["verify", "p2-sextic", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.starts_with("scenario p2-sextic-n3: PASS"));
    assert!(out.contains("Z/2"));
}

#[test]
fn sextic_out_of_range_is_usage_error() {
    for n in ["2", "19"] {
        let o = ncy(&["verify", "p2-sextic", "--n", n]);
        assert_eq!(o.status.code(), Some(2));
        assert!(stderr(&o).contains(n));
    }
}

#[test]
fn sextic_needs_n_or_all() {
    assert_eq!(ncy(&["verify", "p2-sextic"]).status.code(), Some(2));
    assert_eq!(ncy(&["verify", "p2-sextic", "--n", "3", "--all"]).status.code(), Some(2));
}

#[test]
fn sweep_is_ordered_and_passes() {
    let o = ncy(&["verify", "p2-sextic", "--all", "--quiet"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    let expected: Vec<String> = (3..=18).map(|n| format!("scenario p2-sextic-n{n}: PASS")).collect();
    assert_eq!(lines, expected);
}

#[test]
fn sweep_json_is_deterministic() {
    let a = stdout(&ncy(&["verify", "p2-sextic", "--all", "--json"]));
    let b = stdout(&ncy(&["verify", "p2-sextic", "--all", "--json"]));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 16);
}

#[test]
fn quadric_and_hirzebruch_pass() {
    let q = ncy(&["verify", "quadric"]);
    assert_eq!(q.status.code(), Some(0));
    assert!(stdout(&q).contains("P1xP1"));
    let f = ncy(&["verify", "hirzebruch2"]);
    assert_eq!(f.status.code(), Some(0));
    assert!(stdout(&f).contains("F2"));
}

#[test]
fn json_report_round_trips() {
    let o = ncy(&["verify", "quadric", "--json"]);
    let text = stdout(&o);
    let report = ncy_core::report::Report::from_json(&text).unwrap();
    assert_eq!(report.to_json() + "\n", text);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let again: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(v, again);
    assert_eq!(v["passed"], serde_json::Value::Bool(true));
}

#[test]
fn file_matches_golden() {
    for name in ["quadric", "hirzebruch2", "p2-sextic-n3"] {
        let o = ncy(&["verify", "file", &data(&format!("scenarios/{name}.json")), "--json"]);
        let golden = std::fs::read_to_string(data(&format!("golden/{name}.json"))).unwrap();
        assert_eq!(stdout(&o), golden, "{name}");
    }
}

#[test]
fn perturbed_file_fails_with_exit_one() {
    let o = ncy(&["verify", "file", &data("scenarios/p2-sextic-n3-perturbed.json")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL  extension"));
    assert!(out.contains("-5/2"));
}

#[test]
fn schema_error_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("scenarios/quadric.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["sublattice"]["gram"][0][1] = serde_json::json!(7);
    let path = dir.path().join("bad.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let o = ncy(&["verify", "file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("gram"), "{}", stderr(&o));
}

#[test]
fn wrong_declared_order_is_an_action_failure() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("scenarios/quadric.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["involution"]["order"] = serde_json::json!(3);
    let path = dir.path().join("order3.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let o = ncy(&["verify", "file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL  isometry"));
    assert!(stdout(&o).contains("action:"));
}

#[test]
fn missing_file_is_input_error() {
    let o = ncy(&["verify", "file", "/nonexistent/scenario.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn snf_command() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, "[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]").unwrap();
    let o = ncy(&["snf", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("diagonal (2, 6, 12), rank 3"), "{}", stdout(&o));
    let j = ncy(&["snf", path.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v["diagonal"], serde_json::json!([2, 6, 12]));
    assert_eq!(v["verified"], serde_json::Value::Bool(true));
}

#[test]
fn snf_accepts_string_integers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.json");
    std::fs::write(&path, r#"[["123456789012345678901234567890", 0], [0, 1]]"#).unwrap();
    let o = ncy(&["snf", path.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["diagonal"], serde_json::json!([1, "123456789012345678901234567890"]));
}

#[test]
fn snf_rejects_ragged_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ragged.json");
    std::fs::write(&path, "[[1, 2], [3]]").unwrap();
    assert_eq!(ncy(&["snf", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn h1_command() {
    let o = ncy(&["h1", &data("scenarios/hirzebruch2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("H1 = Z/2"), "{out}");
    assert!(out.contains("s3-s5 reach every class"));
    let j = ncy(&["h1", &data("scenarios/p2-sextic-n18.json"), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v["description"], serde_json::json!("(Z/2)^16"));
}

#[test]
fn list_cap_limits_materialized_orders() {
    let o = ncy(&["verify", "p2-sextic", "--n", "6", "--list-cap", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["orders"]["count"], serde_json::json!(15));
    assert_eq!(v["orders"]["classes"].as_array().unwrap().len(), 4);
    assert_eq!(v["orders"]["truncated"], serde_json::Value::Bool(true));
}
