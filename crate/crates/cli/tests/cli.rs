//! End-to-end tests of the `projcoh` binary: golden outputs, JSON schema
//! conformance, determinism, and exit-code behavior.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_projcoh"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "expected success for {:?}, stderr: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(
        out.stderr.is_empty(),
        "expected empty stderr for {:?}",
        args
    );
    String::from_utf8(out.stdout).expect("utf8 stdout")
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/goldens")
        .join(name)
}

fn assert_golden(name: &str, args: &[&str]) {
    let expected = std::fs::read_to_string(golden_path(name))
        .unwrap_or_else(|e| panic!("missing golden {name}: {e}"));
    let actual = stdout_of(args);
    assert_eq!(actual, expected, "golden mismatch for {name} ({args:?})");
}

fn schema_for(command: &str) -> jsonschema::JSONSchema {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(format!("{command}.v1.schema.json"));
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing schema {}: {e}", path.display()));
    let doc: serde_json::Value = serde_json::from_str(&text).expect("schema parses");
    jsonschema::JSONSchema::options()
        .with_draft(jsonschema::Draft::Draft7)
        .compile(&doc)
        .expect("schema compiles")
}

fn assert_valid(command: &str, args: &[&str]) {
    let out = stdout_of(args);
    let value: serde_json::Value = serde_json::from_str(&out).expect("output is JSON");
    let schema = schema_for(command);
    let result = schema.validate(&value);
    if let Err(errors) = result {
        let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
        panic!("schema violations for {args:?}: {msgs:?}");
    }
}

// ------------------------------------------------------------------
// golden outputs
// ------------------------------------------------------------------

#[test]
fn golden_betti_field_json() {
    assert_golden(
        "betti_field_m1_k1_lambda1.json",
        &["betti", "--m", "1", "--k", "1", "--lambda", "1"],
    );
}

#[test]
fn golden_betti_field_tsv() {
    assert_golden(
        "betti_field_m1_k1_lambda1.tsv",
        &["betti", "--m", "1", "--k", "1", "--lambda", "1", "--format", "tsv"],
    );
}

#[test]
fn golden_betti_operator_json() {
    assert_golden(
        "betti_op_m1_p1_q0.json",
        &[
            "betti", "--m", "1", "--p", "1", "--q", "0", "--lambda", "0", "--mu", "1",
            "--order-cap", "2",
        ],
    );
}

#[test]
fn golden_betti_operator_with_oracle() {
    assert_golden(
        "betti_op_m1_p1_q0_oracle.json",
        &[
            "betti", "--m", "1", "--p", "1", "--q", "0", "--lambda", "0", "--mu", "1",
            "--order-cap", "2", "--oracle",
        ],
    );
}

#[test]
fn golden_split() {
    assert_golden(
        "split_m1_k2.json",
        &["split", "--m", "1", "--k", "2", "--lambda", "-1/2", "--mu", "1"],
    );
}

#[test]
fn golden_quantize() {
    assert_golden(
        "quantize_m1_k2.json",
        &["quantize", "--m", "1", "--k", "2", "--lambda", "0", "--mu", "1/3"],
    );
}

#[test]
fn golden_casimir_json() {
    assert_golden(
        "casimir_m1_p1.json",
        &["casimir", "--m", "1", "--p", "1", "--lambda", "0", "--mu", "0"],
    );
}

#[test]
fn golden_casimir_tsv() {
    assert_golden(
        "casimir_m1_p1.tsv",
        &[
            "casimir", "--m", "1", "--p", "1", "--lambda", "0", "--mu", "0", "--format", "tsv",
        ],
    );
}

#[test]
fn golden_cocycles() {
    assert_golden(
        "cocycles_m1.json",
        &["cocycles", "--m", "1", "--p", "1", "--q", "0", "--lambda", "0", "--mu", "1"],
    );
}

#[test]
fn golden_homs_tsv() {
    assert_golden(
        "homs_m1.tsv",
        &[
            "homs", "--m", "1", "--p", "1", "--q", "1", "--lambda", "1/3", "--mu", "1/3",
            "--format", "tsv",
        ],
    );
}

#[test]
fn golden_critical_table() {
    assert_golden(
        "critical_table_m1.json",
        &["critical-table", "--m", "1", "--n", "3"],
    );
}

// ------------------------------------------------------------------
// determinism
// ------------------------------------------------------------------

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "betti", "--m", "1", "--p", "1", "--q", "0", "--lambda", "0", "--mu", "1",
    ];
    let first = stdout_of(&args);
    let second = stdout_of(&args);
    assert_eq!(first, second);
}

// ------------------------------------------------------------------
// schema conformance
// ------------------------------------------------------------------

#[test]
fn betti_field_output_validates() {
    assert_valid("betti", &["betti", "--m", "1", "--k", "2", "--lambda", "0"]);
}

#[test]
fn betti_operator_output_validates() {
    assert_valid(
        "betti",
        &[
            "betti", "--m", "1", "--p", "1", "--q", "0", "--lambda", "0", "--mu", "1",
            "--oracle", "--expect", "1,2,1,0",
        ],
    );
}

#[test]
fn betti_density_output_validates() {
    assert_valid(
        "betti",
        &["betti", "--m", "1", "--lambda", "1/2", "--mu", "1/2", "--max-degree", "2"],
    );
}

#[test]
fn split_output_validates() {
    assert_valid(
        "split",
        &["split", "--m", "2", "--k", "1", "--lambda", "0", "--mu", "2/3"],
    );
}

#[test]
fn split_nonsplit_output_validates() {
    assert_valid(
        "split",
        &["split", "--m", "1", "--k", "2", "--lambda", "1/4", "--mu", "7/4"],
    );
}

#[test]
fn quantize_output_validates() {
    assert_valid(
        "quantize",
        &["quantize", "--m", "2", "--k", "2", "--lambda", "1/7", "--mu", "1/7"],
    );
}

#[test]
fn casimir_output_validates() {
    assert_valid(
        "casimir",
        &["casimir", "--m", "2", "--p", "1", "--lambda", "0", "--mu", "1/2", "--expect", "1/4"],
    );
}

#[test]
fn cocycles_output_validates() {
    assert_valid(
        "cocycles",
        &["cocycles", "--m", "1", "--p", "2", "--n", "0", "--lambda", "0", "--mu", "5/9"],
    );
}

#[test]
fn homs_output_validates() {
    assert_valid(
        "homs",
        &["homs", "--m", "1", "--p", "1", "--q", "0", "--lambda", "0", "--mu", "1"],
    );
}

#[test]
fn critical_table_output_validates() {
    assert_valid("critical-table", &["critical-table", "--m", "3", "--n", "4", "--q", "1"]);
}

// ------------------------------------------------------------------
// exit codes and error reporting
// ------------------------------------------------------------------

#[test]
fn no_arguments_prints_usage_and_fails() {
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("USAGE"));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("critical-table"));
}

#[test]
fn unknown_command_exits_one() {
    let out = run(&["eigenvalues", "--m", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("eigenvalues"));
}

#[test]
fn unknown_flag_exits_one() {
    let out = run(&["casimir", "--m", "1", "--banana", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--banana"));
}

#[test]
fn malformed_rational_exits_one() {
    let out = run(&["casimir", "--m", "1", "--p", "0", "--lambda", "1/0", "--mu", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_format_exits_one() {
    let out = run(&["critical-table", "--m", "1", "--format", "xml"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("xml"));
}

#[test]
fn missing_required_flag_exits_one() {
    let out = run(&["split", "--m", "1", "--k", "2", "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--mu"));
}

#[test]
fn met_expectation_exits_zero() {
    let out = run(&[
        "casimir", "--m", "1", "--p", "1", "--lambda", "0", "--mu", "0", "--expect", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn failed_expectation_exits_two_and_names_the_witness() {
    let out = run(&[
        "casimir", "--m", "1", "--p", "1", "--lambda", "0", "--mu", "0", "--expect", "3/4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("property violation"));
    assert!(err.contains("3/4"), "stderr names the expected value: {err}");
    assert!(err.contains("m=1"), "stderr names the witness: {err}");
}

#[test]
fn failed_betti_expectation_exits_two() {
    let out = run(&[
        "betti", "--m", "1", "--k", "1", "--lambda", "1", "--expect", "0,0,0,0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("expected dims [0,0,0,0]"));
    assert!(err.contains("[1,1,0,0]"));
}
