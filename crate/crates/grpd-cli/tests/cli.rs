//! End-to-end runs of the compiled binary: exit codes, report contents,
//! and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn grpd(args: &[&str], cwd: &Path) -> (i32, Value, Output) {
    let out = Command::new(env!("CARGO_BIN_EXE_grpd"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs");
    let code = out.status.code().expect("exit code");
    let report: Value = serde_json::from_slice(&out.stdout).expect("stdout is a JSON report");
    (code, report, out)
}

fn write(dir: &Path, name: &str, body: &str) {
    std::fs::write(dir.join(name), body).expect("fixture write");
}

const ENTRANCE: &str = r#"{"vertices": ["v1", "v2"], "edges": [
    {"id": "e1", "src": "v1", "rng": "v1"},
    {"id": "e2", "src": "v2", "rng": "v1"},
    {"id": "e3", "src": "v2", "rng": "v2"}]}"#;

const FULL_SHIFT: &str = r#"{"vertices": ["v"], "edges": [
    {"id": "a", "src": "v", "rng": "v"},
    {"id": "b", "src": "v", "rng": "v"}]}"#;

const SINGLE_LOOP: &str = r#"{"vertices": ["v"], "edges": [
    {"id": "a", "src": "v", "rng": "v"}]}"#;

const FS0: &str = r#"{"X": ["1","2","3"], "Y": ["a","b"], "sigma": {"1":"a","2":"a","3":"b"}}"#;

const COLLAPSE_MODEL: &str = r#"{"points": ["a", "b"], "sigma": {"a": "b", "b": "b"},
    "metric": [["0", "1"], ["1", "0"]]}"#;

#[test]
fn decide_reports_the_entrance_witness() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "entrance.json", ENTRANCE);
    let (code, report, _) = grpd(&["decide", "entrance.json"], dir.path());
    assert_eq!(code, 1);
    assert_eq!(report["result"]["embeddable"], Value::Bool(false));
    let verdicts = report["result"]["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 3);
    let lp = &verdicts[0];
    assert_eq!(lp["method"], "lp");
    assert_eq!(lp["certificate"]["type"], "witness");
    assert_eq!(lp["certificate"]["f"], serde_json::json!(["0", "1"]));
    assert_eq!(lp["certificate"]["h"], serde_json::json!(["1", "0"]));
    assert!(report["input"]["digest"]
        .as_str()
        .unwrap()
        .starts_with("sha256:"));
}

#[test]
fn decide_exits_zero_on_embeddable_graphs() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "loop.json", SINGLE_LOOP);
    let (code, report, _) = grpd(&["decide", "loop.json", "--verify"], dir.path());
    assert_eq!(code, 0);
    assert_eq!(report["result"]["embeddable"], Value::Bool(true));
    assert_eq!(report["result"]["verified"], Value::Bool(true));
}

#[test]
fn source_vertices_are_named_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "bad.json",
        r#"{"vertices": ["v1", "v2"], "edges": [
            {"id": "e1", "src": "v1", "rng": "v1"},
            {"id": "e2", "src": "v2", "rng": "v1"}]}"#,
    );
    let (code, report, _) = grpd(&["decide", "bad.json"], dir.path());
    assert_eq!(code, 2);
    assert_eq!(report["error"]["kind"], "precondition");
    assert!(report["error"]["message"].as_str().unwrap().contains("v2"));
}

#[test]
fn malformed_json_errors_carry_a_position() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "broken.json", "{broken");
    let (code, report, _) = grpd(&["decide", "broken.json"], dir.path());
    assert_eq!(code, 2);
    assert_eq!(report["error"]["kind"], "structural");
    let message = report["error"]["message"].as_str().unwrap();
    assert!(message.contains("line") && message.contains("column"));
}

#[test]
fn homology_presents_the_free_rank() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "fs0.json", FS0);
    let (code, report, _) = grpd(&["homology", "fs0.json"], dir.path());
    assert_eq!(code, 0);
    assert_eq!(report["result"]["free_rank"], 2);
    assert_eq!(report["result"]["torsion"], serde_json::json!([]));
    assert_eq!(
        report["result"]["positive_cone"],
        serde_json::json!([["1", "0"], ["0", "1"]])
    );

    let (code, report, _) = grpd(&["homology", "fs0.json", "--degree", "1"], dir.path());
    assert_eq!(code, 0);
    assert_eq!(report["result"]["free_rank"], 0);
}

#[test]
fn trace_of_the_identity_counts_fibers() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "fs0.json", FS0);
    let (code, report, _) = grpd(&["trace", "fs0.json", "--section", "auto"], dir.path());
    assert_eq!(code, 0);
    assert_eq!(report["result"]["section"], serde_json::json!({"a": "1", "b": "3"}));
    assert_eq!(report["result"]["trace"], serde_json::json!({"1": "2", "3": "1"}));
    assert_eq!(report["result"]["fiber_sums"], serde_json::json!(["2", "1"]));

    write(dir.path(), "phi.json", r#"{"a": "2", "b": "3"}"#);
    let (code, report, _) = grpd(&["trace", "fs0.json", "--section", "phi.json"], dir.path());
    assert_eq!(code, 0);
    assert_eq!(report["result"]["trace"], serde_json::json!({"2": "2", "3": "1"}));
}

#[test]
fn dimgroup_compares_and_orders_elements() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "entrance.json", ENTRANCE);

    let (code, report, _) = grpd(
        &["dimgroup", "entrance.json", "--element", "0,1,0", "--element", "1,1,0", "--op", "equal"],
        dir.path(),
    );
    assert_eq!(code, 0);
    assert_eq!(report["result"]["equal"], Value::Bool(true));

    let (code, report, _) = grpd(
        &["dimgroup", "entrance.json", "--element", "0,1,0", "--element", "0,0,1", "--op", "equal"],
        dir.path(),
    );
    assert_eq!(code, 1);
    assert_eq!(report["result"]["equal"], Value::Bool(false));

    let (code, report, _) = grpd(
        &["dimgroup", "entrance.json", "--element", "0,-1,2", "--op", "positive", "--depth", "6"],
        dir.path(),
    );
    assert_eq!(code, 0);
    assert_eq!(report["result"]["verdict"]["positivity"], "positive");
    assert_eq!(report["result"]["verdict"]["power"], 1);

    let (code, report, _) = grpd(
        &["dimgroup", "entrance.json", "--element", "0,0,-1", "--op", "positive", "--depth", "6"],
        dir.path(),
    );
    assert_eq!(code, 1);
    assert_eq!(report["result"]["verdict"]["positivity"], "not_positive");

    let (code, _, _) = grpd(
        &["dimgroup", "entrance.json", "--element", "0,1,0", "--op", "positive"],
        dir.path(),
    );
    assert_eq!(code, 2);
}

#[test]
fn diagram_commutes_for_auto_and_file_sections() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "entrance.json", ENTRANCE);
    let (code, report, _) = grpd(
        &["diagram", "entrance.json", "--window", "3", "--section", "auto"],
        dir.path(),
    );
    assert_eq!(code, 0);
    assert_eq!(report["result"]["commutes"], Value::Bool(true));
    assert_eq!(report["result"]["section"], serde_json::json!({"v1": "e1", "v2": "e2"}));

    write(dir.path(), "phi.json", r#"{"v1": "e1", "v2": "e3"}"#);
    let (code, report, _) = grpd(
        &["diagram", "entrance.json", "--window", "2", "--section", "phi.json"],
        dir.path(),
    );
    assert_eq!(code, 0);
    assert_eq!(report["result"]["commutes"], Value::Bool(true));

    let (code, _, _) = grpd(
        &["diagram", "entrance.json", "--window", "1", "--section", "auto"],
        dir.path(),
    );
    assert_eq!(code, 2);
}

#[test]
fn pseudoloop_verdicts_follow_the_base_point() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "model.json", COLLAPSE_MODEL);
    let (code, report, _) = grpd(
        &["pseudoloop", "model.json", "--base", "b", "--eps", "1/2"],
        dir.path(),
    );
    assert_eq!(code, 0);
    assert_eq!(report["result"]["exists"], Value::Bool(true));
    assert_eq!(report["result"]["witness"], serde_json::json!(["b"]));

    let (code, report, _) = grpd(
        &["pseudoloop", "model.json", "--base", "a", "--eps", "1/2"],
        dir.path(),
    );
    assert_eq!(code, 1);
    assert_eq!(report["result"]["exists"], Value::Bool(false));
    assert_eq!(report["result"]["cap"], 4);
}

#[test]
fn compress_counts_every_subset() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "perm.json",
        r#"{"points": ["p", "q"], "sigma": {"p": "q", "q": "p"}}"#,
    );
    let (code, report, _) = grpd(&["compress", "perm.json"], dir.path());
    assert_eq!(code, 0);
    assert_eq!(report["result"]["exists"], Value::Bool(false));
    assert_eq!(report["result"]["subsets_checked"], 4);

    write(
        dir.path(),
        "collapse.json",
        r#"{"points": ["a", "b"], "sigma": {"a": "b", "b": "b"}}"#,
    );
    let (code, report, _) = grpd(&["compress", "collapse.json"], dir.path());
    assert_eq!(code, 2);
    assert_eq!(report["error"]["kind"], "precondition");
}

#[test]
fn validate_splits_verdicts_by_admissibility() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "entrance.json", ENTRANCE);
    let (code, report, _) = grpd(&["validate", "entrance.json"], dir.path());
    assert_eq!(code, 0);
    assert_eq!(report["result"]["admissible"], Value::Bool(true));

    write(dir.path(), "lonely.json", r#"{"vertices": ["v"], "edges": []}"#);
    let (code, report, _) = grpd(&["validate", "lonely.json"], dir.path());
    assert_eq!(code, 1);
    assert_eq!(report["result"]["sinks"], serde_json::json!(["v"]));
    assert_eq!(report["result"]["sources"], serde_json::json!(["v"]));
}

#[test]
fn batch_summarizes_a_directory_in_filename_order() {
    let dir = tempfile::tempdir().unwrap();
    let inputs = dir.path().join("inputs");
    std::fs::create_dir(&inputs).unwrap();
    write(&inputs, "entrance.json", ENTRANCE);
    write(&inputs, "fullshift.json", FULL_SHIFT);
    write(&inputs, "loop.json", SINGLE_LOOP);
    write(&inputs, "notes.txt", "not an input");

    let (code, report, _) = grpd(&["batch", "inputs"], dir.path());
    assert_eq!(code, 0);
    let agg = &report["result"]["aggregate"];
    assert_eq!(agg["total"], 3);
    assert_eq!(agg["embeddable"], 1);
    assert_eq!(agg["not_embeddable"], 2);
    assert_eq!(agg["errors"], 0);
    let names: Vec<&str> = report["result"]["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["file"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["entrance.json", "fullshift.json", "loop.json"]);
}

#[test]
fn batch_flags_exactly_one_error_per_bad_file() {
    let dir = tempfile::tempdir().unwrap();
    let inputs = dir.path().join("inputs");
    std::fs::create_dir(&inputs).unwrap();
    write(&inputs, "entrance.json", ENTRANCE);
    write(&inputs, "broken.json", "{broken");
    write(&inputs, "loop.json", SINGLE_LOOP);

    let (code, report, _) = grpd(&["batch", "inputs"], dir.path());
    assert_eq!(code, 0);
    let agg = &report["result"]["aggregate"];
    assert_eq!(agg["total"], 3);
    assert_eq!(agg["errors"], 1);
    let flagged: Vec<&str> = report["result"]["files"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| f.get("error").is_some())
        .map(|f| f["file"].as_str().unwrap())
        .collect();
    assert_eq!(flagged, ["broken.json"]);
}

#[test]
fn batch_of_nothing_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let inputs = dir.path().join("inputs");
    std::fs::create_dir(&inputs).unwrap();
    let (code, report, _) = grpd(&["batch", "inputs"], dir.path());
    assert_eq!(code, 0);
    assert_eq!(report["result"]["aggregate"]["total"], 0);
    assert_eq!(report["result"]["files"], serde_json::json!([]));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "entrance.json", ENTRANCE);
    write(dir.path(), "fs0.json", FS0);
    for args in [
        vec!["decide", "entrance.json", "--verify"],
        vec!["homology", "fs0.json"],
        vec!["trace", "fs0.json", "--section", "auto"],
    ] {
        let (_, _, first) = grpd(&args, dir.path());
        let (_, _, second) = grpd(&args, dir.path());
        assert_eq!(first.stdout, second.stdout, "{:?} drifted", args);
    }
}
