//! Pinned scenario files and their reports. Set UPDATE_GOLDEN=1 to rewrite.

use std::path::PathBuf;

use ncy_core::pipeline::{run, RunOptions};
use ncy_core::report::Report;
use ncy_core::scenario::{builtin, Scenario};

const PINNED: &[(&str, Option<usize>, &str)] = &[
    ("p2-sextic", Some(3), "p2-sextic-n3"),
    ("p2-sextic", Some(4), "p2-sextic-n4"),
    ("p2-sextic", Some(18), "p2-sextic-n18"),
    ("quadric", None, "quadric"),
    ("hirzebruch2", None, "hirzebruch2"),
    ("p2-sextic-perturbed", None, "p2-sextic-n3-perturbed"),
];

/// Hand-written scenarios with no built-in counterpart.
const FILE_ONLY: &[&str] = &["rational-elliptic"];

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn update() -> bool {
    std::env::var_os("UPDATE_GOLDEN").is_some_and(|v| v == "1")
}

fn compare_or_write(path: PathBuf, actual: &str) {
    if update() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(expected, actual, "{} is out of date", path.display());
}

#[test]
fn pinned_scenarios_match_builtins() {
    for &(name, n, file) in PINNED {
        let s = builtin(name, n).unwrap();
        compare_or_write(data_dir().join("scenarios").join(format!("{file}.json")), &(s.to_json() + "\n"));
        let text = std::fs::read_to_string(data_dir().join("scenarios").join(format!("{file}.json"))).unwrap();
        assert_eq!(Scenario::from_json(&text).unwrap(), s);
    }
}

#[test]
fn golden_reports() {
    for &(name, n, file) in PINNED {
        let report = run(&builtin(name, n).unwrap(), &RunOptions::default()).unwrap();
        compare_or_write(data_dir().join("golden").join(format!("{file}.json")), &(report.to_json() + "\n"));
    }
}

#[test]
fn reports_round_trip() {
    for &(name, n, _) in PINNED {
        let report = run(&builtin(name, n).unwrap(), &RunOptions::default()).unwrap();
        let text = report.to_json();
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.to_json(), text);
    }
}

#[test]
fn pinned_files_give_golden_reports() {
    let files = PINNED.iter().map(|p| p.2).chain(FILE_ONLY.iter().copied());
    for file in files {
        let text = std::fs::read_to_string(data_dir().join("scenarios").join(format!("{file}.json"))).unwrap();
        let report = run(&Scenario::from_json(&text).unwrap(), &RunOptions::default()).unwrap();
        compare_or_write(data_dir().join("golden").join(format!("{file}.json")), &(report.to_json() + "\n"));
    }
}
