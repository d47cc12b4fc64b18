use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn ballfix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ballfix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "structured"];
    all.extend_from_slice(args);
    let out = ballfix(&all);
    let json = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "not JSON ({e}): {}{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (out.status.code().unwrap(), json)
}

fn temp_scenario(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn bundled_scenarios_pass() {
    let mut seen = 0;
    for entry in std::fs::read_dir(scenario_dir()).unwrap() {
        let path = entry.unwrap().path();
        let (code, report) = structured(&["verify", "--scenario", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{}: {report:#}", path.display());
        assert_eq!(report["diffs"], Value::Array(vec![]));
        seen += 1;
    }
    assert!(seen >= 6);
}

#[test]
fn three_point_scenario_reports_c() {
    let path = scenario_dir().join("nfpt1_three_point.json");
    let (code, report) = structured(&["verify", "--scenario", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["outputs"]["nfpt1"]["fixed_point"], "c");
    assert!(report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .all(|v| v["passed"] == true));
}

#[test]
fn hensel_scenario_trace() {
    let path = scenario_dir().join("hensel_sqrt2.json");
    let (code, report) = structured(&["verify", "--scenario", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["outputs"]["digits"], serde_json::json!([3, 10, 108]));
}

#[test]
fn reports_are_deterministic() {
    let path = scenario_dir().join("nfpt1_three_point.json");
    let a = ballfix(&[
        "--format",
        "structured",
        "verify",
        "--scenario",
        path.to_str().unwrap(),
    ]);
    let b = ballfix(&[
        "--format",
        "structured",
        "verify",
        "--scenario",
        path.to_str().unwrap(),
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_file_is_an_input_error() {
    let f = temp_scenario("{ \"points\": [\"a\",\n  \"b\" ");
    let out = ballfix(&["verify", "--scenario", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let missing = ballfix(&["verify", "--scenario", "/nonexistent/scenario.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn schema_violations_are_input_errors() {
    for text in [
        r#"{"points": ["a"], "balls": [["a"]], "map": {"a": "a"}, "colour": 1}"#,
        r#"{"points": ["a"], "balls": [["b"]], "map": {"a": "a"}}"#,
        r#"{"points": ["a", "b"], "balls": [["a"]], "map": {"a": "a"}}"#,
        r#"{"kind": "lattice", "points": []}"#,
        r#"{"kind": "banach", "a": [["1/2"]], "b": ["x"], "c": "1/2", "start": ["0"], "eps": "1/8"}"#,
    ] {
        let f = temp_scenario(text);
        let out = ballfix(&["verify", "--scenario", f.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{text}");
    }
}

#[test]
fn expectation_mismatch_exits_one() {
    let f = temp_scenario(
        r#"{"points": ["a", "b"], "balls": [["a", "b"], ["b"]], "map": {"a": "b", "b": "b"},
            "expected": {"fixed_point": "a"}}"#,
    );
    let (code, report) = structured(&["verify", "--scenario", f.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(report["diffs"][0]["key"], "fixed_point");
    assert_eq!(report["diffs"][0]["actual"], "b");
}

#[test]
fn violated_hypotheses_are_not_failures() {
    let f = temp_scenario(
        r#"{"points": ["a", "b"], "balls": [["a", "b"]], "map": {"a": "b", "b": "a"}}"#,
    );
    let (code, report) = structured(&["verify", "--scenario", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(report["outputs"]["nfpt1"]["violated"], "C1");
    assert_eq!(report["outputs"]["fixed_point"], Value::Null);
}

#[test]
fn sweeps_find_no_counterexamples() {
    let (code, report) = structured(&["sweep", "nfpt", "--max-points", "3", "--max-balls", "5"]);
    assert_eq!(code, 0);
    assert_eq!(report["outputs"]["spaces"], 41);
    assert_eq!(report["contradictions"], Value::Array(vec![]));
    let (code, report) = structured(&["--jobs", "2", "topo", "sweep", "--max-points", "3"]);
    assert_eq!(code, 0);
    assert_eq!(report["outputs"]["topologies"], 13);
    let (code, report) = structured(&["--seed", "11", "sweep", "banach", "--count", "20"]);
    assert_eq!(code, 0);
    assert_eq!(report["outputs"]["passed"], 20);
}

#[test]
fn bounds_beyond_cap_are_rejected() {
    for args in [
        &["sweep", "nfpt", "--max-points", "9"][..],
        &["sweep", "gfpt", "--max-points", "4"],
        &["topo", "sweep", "--max-points", "5"],
        &["sweep", "banach", "--count", "0"],
    ] {
        let out = ballfix(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn subcommands() {
    let (code, report) = structured(&[
        "hensel",
        "--prime",
        "7",
        "--precision",
        "3",
        "--poly",
        "-2,0,1",
        "--start",
        "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        report["outputs"]["trace"],
        serde_json::json!([[1, 3], [2, 10], [3, 108]])
    );
    let out = ballfix(&[
        "hensel",
        "--prime",
        "7",
        "--precision",
        "3",
        "--poly",
        "-2,0,1",
        "--start",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let (code, report) = structured(&[
        "banach",
        "--affine",
        "1/2,0,0,1/3;1,1",
        "--C",
        "1/2",
        "--start",
        "0,0",
        "--eps",
        "1/1024",
    ]);
    assert_eq!(code, 0);
    assert_eq!(report["outputs"]["radius"], "1/1024");

    let (code, report) = structured(&[
        "oag",
        "--map",
        "affine:1/2,t^1",
        "--ratio",
        "1/2",
        "--start",
        "0",
        "--trunc",
        "32",
    ]);
    assert_eq!(code, 0);
    assert_eq!(report["outputs"]["point"], "2t^1");
}
