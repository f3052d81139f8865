//! Command-line contract: exit codes, report round trips, config echo.

use std::fs;

use genus_approx::cli::{run, EXIT_OK, EXIT_REJECTED, EXIT_USAGE};
use serde_json::Value;

const K5: &str = "0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";
const SQUARE: &str = "0 1\n1 2\n2 3\n3 0\n";

fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("genus-approx").chain(args.iter().copied());
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const DRAWING_COMMANDS: [&str; 5] = ["genus", "orientable-genus", "crossing", "planarize-vertices", "planarize-edges"];

#[test]
fn feasible_reports_verify_with_and_without_the_graph() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("k5.txt");
    fs::write(&graph, K5).unwrap();
    for cmd in DRAWING_COMMANDS {
        let (code, report, err) = call(&[cmd, "--budget", "1"], K5);
        assert_eq!(code, EXIT_OK, "{cmd}: {err}");
        assert_eq!(call(&["verify"], &report).0, EXIT_OK, "{cmd}");
        assert_eq!(call(&["verify", "--graph", graph.to_str().unwrap()], &report).0, EXIT_OK, "{cmd}");
    }
}

#[test]
fn rejections_exit_two_and_verify_against_the_graph() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("k5.txt");
    fs::write(&graph, K5).unwrap();
    for cmd in DRAWING_COMMANDS {
        let (code, report, _) = call(&[cmd, "--budget", "0"], K5);
        assert_eq!(code, EXIT_REJECTED, "{cmd}");
        assert_eq!(call(&["verify"], &report).0, EXIT_USAGE, "{cmd}: rejection without --graph");
        assert_eq!(call(&["verify", "--graph", graph.to_str().unwrap()], &report).0, EXIT_OK, "{cmd}");
    }
}

#[test]
fn rejection_does_not_verify_against_a_planar_graph() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("square.txt");
    fs::write(&graph, SQUARE).unwrap();
    let (_, report, _) = call(&["genus", "--budget", "0"], K5);
    assert_eq!(call(&["verify", "--graph", graph.to_str().unwrap()], &report).0, EXIT_REJECTED);
}

#[test]
fn tampered_embedding_fails_verification() {
    let (_, report, _) = call(&["genus", "--budget", "1"], K5);
    let mut v: Value = serde_json::from_str(&report).unwrap();
    let rotation = v["result"]["embedding"]["rotation"]["0"].as_array_mut().unwrap();
    rotation.pop();
    let (code, out, _) = call(&["verify"], &v.to_string());
    assert_eq!(code, EXIT_REJECTED, "{out}");
}

#[test]
fn tampered_genus_fails_verification() {
    let (_, report, _) = call(&["genus", "--budget", "1"], K5);
    let mut v: Value = serde_json::from_str(&report).unwrap();
    v["result"]["genus"] = Value::from(0);
    assert_eq!(call(&["verify"], &v.to_string()).0, EXIT_REJECTED);
}

#[test]
fn garbage_is_a_usage_error() {
    assert_eq!(call(&["verify"], "not json").0, EXIT_USAGE);
    assert_eq!(call(&["verify"], "{\"command\": \"genus\"}").0, EXIT_REJECTED);
    assert_eq!(call(&["genus", "--budget", "1"], "0 x\n").0, EXIT_USAGE);
    assert_eq!(call(&["genus", "--budget", "1"], "0 0\n").0, EXIT_USAGE);
}

#[test]
fn budget_is_required_for_pipelines() {
    for cmd in DRAWING_COMMANDS {
        let (code, _, err) = call(&[cmd], K5);
        assert_eq!(code, EXIT_USAGE, "{cmd}");
        assert!(err.contains("--budget"));
    }
    assert_eq!(call(&["bogus"], K5).0, EXIT_USAGE);
    assert_eq!(call(&["--help"], "").0, EXIT_OK);
}

#[test]
fn config_is_echoed_and_validated() {
    let (code, report, _) = call(&["genus", "--budget", "1", "--set", "treewidth_threshold=20", "--set", "ring_surplus=4"], K5);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&report).unwrap();
    assert_eq!(v["config"]["treewidth_threshold"], 20);
    assert_eq!(v["config"]["ring_surplus"], 4);
    assert_eq!(v["result"]["config"], v["config"]);
    assert_eq!(v["command"], "genus");
    assert_eq!(v["budget"], 1);
    assert_eq!(call(&["genus", "--budget", "1", "--set", "no_such_key=1"], K5).0, EXIT_USAGE);
    assert_eq!(call(&["genus", "--budget", "1", "--set", "balance=2"], K5).0, EXIT_USAGE);
    assert_eq!(call(&["genus", "--budget", "1", "--set", "balance"], K5).0, EXIT_USAGE);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let g = genus_approx::graphcore::generators::torus_grid(8, 8);
    let mut text = Vec::new();
    genus_approx::graphcore::write_edge_list(&g, &mut text).unwrap();
    let text = String::from_utf8(text).unwrap();
    let (_, one, _) = call(&["genus", "--budget", "2", "--threads", "1"], &text);
    let (_, four, _) = call(&["genus", "--budget", "2", "--threads", "4"], &text);
    assert_eq!(one, four);
}

#[test]
fn files_in_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let (input, output) = (dir.path().join("g.txt"), dir.path().join("r.json"));
    fs::write(&input, K5).unwrap();
    let code = call(&["crossing", "--budget", "1", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()], "").0;
    assert_eq!(code, EXIT_OK);
    let report = fs::read_to_string(&output).unwrap();
    assert_eq!(call(&["verify", "--input", output.to_str().unwrap()], "").0, EXIT_OK);
    assert!(report.contains("\"provenance\""));
    let missing = dir.path().join("missing.txt");
    assert_eq!(call(&["genus", "--budget", "1", "--input", missing.to_str().unwrap()], "").0, EXIT_USAGE);
}

#[test]
fn oracle_prints_the_value() {
    assert_eq!(call(&["oracle", "euler-genus"], K5), (EXIT_OK, "1\n".into(), String::new()));
    assert_eq!(call(&["oracle", "crossing-number"], K5).1, "1\n");
    assert_eq!(call(&["oracle", "orientable-genus"], SQUARE).1, "0\n");
    assert_eq!(call(&["oracle", "euler-genus", "--max-states", "10"], K5).0, EXIT_USAGE);
}
