use std::path::{Path, PathBuf};

use netsap::cli::{
    main_with, EXIT_CHECK_FAILED, EXIT_OK, EXIT_STATE_CAP, EXIT_UNSATISFIABLE, EXIT_USAGE,
};
use netsap::fixtures;
use netsap::io::{parse_model, parse_pairs, parse_policy};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("netsap").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn naive_policy_is_rejected_with_a_witness() {
    let (code, out, _) = run(&[
        "check-feasibility",
        &fixture("toy.json"),
        &fixture("toy_naive_policy.json"),
        "--no",
        "1",
        "--nc",
        "2",
    ]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    assert!(
        out.contains("condition 1: a fires at 3 under the decision made at 0"),
        "{out}"
    );
}

#[test]
fn synthesized_toy_policy_is_feasible() {
    let (code, out, _) = run(&[
        "check-feasibility",
        &fixture("toy.json"),
        &fixture("toy_dstar.json"),
        "--no",
        "1",
        "--nc",
        "2",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "feasible");
}

#[test]
fn synthesize_writes_policy_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let policy = path(&dir, "policy.json");
    let trace = path(&dir, "trace.json");
    let (code, out, err) = run(&[
        "synthesize",
        &fixture("toy.json"),
        &fixture("toy_spec.json"),
        "--no",
        "1",
        "--nc",
        "2",
        "-o",
        policy.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.starts_with("policy (4 transitions)"), "{out}");
    let toy = fixtures::toy();
    let written = parse_policy(&toy, &std::fs::read_to_string(&policy).unwrap()).unwrap();
    assert_eq!(written, fixtures::toy_dstar());
    let steps: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(!steps.as_array().unwrap().is_empty());
    assert!(steps[0].get("accepted").is_some());
}

#[test]
fn explicit_order_file_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let order = path(&dir, "order.json");
    let trace = path(&dir, "trace.json");
    std::fs::write(
        &order,
        r#"{"activate":[{"state":"4","event":"b"},{"state":"0","event":"b"}]}"#,
    )
    .unwrap();
    let (code, _, err) = run(&[
        "synthesize",
        &fixture("toy.json"),
        &fixture("toy_spec.json"),
        "--no",
        "1",
        "--nc",
        "2",
        "--order",
        order.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let steps: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(steps[0]["state"], "4");
    assert_eq!(steps[1]["state"], "0");
    assert_eq!(steps[1]["accepted"], false);
}

#[test]
fn build_comm_writes_json_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let json = path(&dir, "comm.json");
    let dot = path(&dir, "comm.dot");
    let (code, out, _) = run(&[
        "build-comm",
        &fixture("toy.json"),
        "--no",
        "1",
        "--nc",
        "2",
        "-o",
        json.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("states:"));
    let dot = std::fs::read_to_string(&dot).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("(0 | ε | ε)"));
    assert!(dot.contains("(1 | (a,0) | ε)"));
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let kinds: Vec<&str> = value["events"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["kind"].as_str().unwrap())
        .collect();
    assert!(
        kinds.contains(&"plant") && kinds.contains(&"comm") && kinds.contains(&"exec"),
        "{kinds:?}"
    );
}

#[test]
fn missing_bound_is_a_usage_error() {
    let (code, _, err) = run(&["build-comm", &fixture("toy.json"), "--nc", "2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!err.is_empty());
    let (code, _, _) = run(&[
        "check-feasibility",
        "no-such-model.json",
        &fixture("toy_dstar.json"),
        "--no",
        "1",
        "--nc",
        "1",
    ]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn state_cap_is_reported() {
    let (code, _, err) = run(&[
        "--state-cap",
        "5",
        "build-comm",
        &fixture("toy.json"),
        "--no",
        "1",
        "--nc",
        "2",
    ]);
    assert_eq!(code, EXIT_STATE_CAP);
    assert!(err.contains("5"), "{err}");
}

#[test]
fn prodline_two_step_diagnosis_is_unsatisfiable() {
    let dir = tempfile::tempdir().unwrap();
    let model = path(&dir, "refined.json");
    let spec = path(&dir, "spec.json");
    let m = fixture("prodline.json");
    let (code, _, _) = run(&[
        "diag",
        "refine",
        &m,
        "--fault",
        "F=f",
        "--k",
        "2",
        "-o",
        model.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let (code, _, _) = run(&[
        "diag",
        "spec",
        &m,
        "--fault",
        "F=f",
        "--k",
        "2",
        "-o",
        spec.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let refined = parse_model(&std::fs::read_to_string(&model).unwrap()).unwrap();
    let pairs = parse_pairs(&refined, &std::fs::read_to_string(&spec).unwrap()).unwrap();
    assert!(!pairs.is_empty());

    let (code, out, _) = run(&[
        "synthesize",
        model.to_str().unwrap(),
        spec.to_str().unwrap(),
        "--no",
        "2",
        "--nc",
        "2",
    ]);
    assert_eq!(code, EXIT_UNSATISFIABLE);
    assert!(out.contains("(x4,2)"), "{out}");

    // Three steps suffice.
    let (code, _, _) = run(&[
        "diag",
        "refine",
        &m,
        "--fault",
        "F=f",
        "--k",
        "3",
        "-o",
        model.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let (code, _, _) = run(&[
        "diag",
        "spec",
        &m,
        "--fault",
        "F=f",
        "--k",
        "3",
        "-o",
        spec.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let (code, out, err) = run(&[
        "synthesize",
        model.to_str().unwrap(),
        spec.to_str().unwrap(),
        "--no",
        "2",
        "--nc",
        "2",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.starts_with("policy"));
}

#[test]
fn diag_check_accepts_original_state_policies() {
    let m = fixture("prodline.json");
    let p = fixture("prodline_static_ac.json");
    let (code, out, _) = run(&[
        "diag", "check", &m, "--fault", "F=f", "--k", "3", "--no", "2", "--nc", "2", "--policy", &p,
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("delay 3-diagnosable"));
    let (code, out, _) = run(&[
        "diag", "check", &m, "--fault", "F=f", "--k", "2", "--no", "2", "--nc", "2", "--policy", &p,
    ]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    assert!(out.contains("not delay 2-diagnosable"));
}

#[test]
fn max_subpolicy_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = path(&dir, "sub.json");
    let (code, out, _) = run(&[
        "max-subpolicy",
        &fixture("toy.json"),
        &fixture("toy_naive_policy.json"),
        "--no",
        "1",
        "--nc",
        "2",
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("confusable:"));
    let (code, _, _) = run(&[
        "check-feasibility",
        &fixture("toy.json"),
        out_path.to_str().unwrap(),
        "--no",
        "1",
        "--nc",
        "2",
    ]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn decentralized_synthesis_writes_one_policy_per_agent() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = path(&dir, "vector.json");
    let (code, out, err) = run(&[
        "synthesize-dec",
        &fixture("toy.json"),
        &fixture("toy_agents.json"),
        &fixture("toy_joint_spec.json"),
        "--seed",
        "3",
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("agent 1") && out.contains("agent 2"));
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(value["agents"].as_array().unwrap().len(), 2);
}

#[test]
fn simulation_agrees_under_a_feasible_policy_only() {
    let dir = tempfile::tempdir().unwrap();
    let log = path(&dir, "sim.log");
    let (code, out, _) = run(&[
        "simulate",
        &fixture("toy.json"),
        &fixture("toy_dstar.json"),
        "--no",
        "1",
        "--nc",
        "2",
        "--runs",
        "50",
        "--log",
        log.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    let text = std::fs::read_to_string(&log).unwrap();
    assert!(text.starts_with("# run 0 seed 0"));
    let (code, _, _) = run(&[
        "simulate",
        &fixture("toy.json"),
        &fixture("toy_naive_policy.json"),
        "--no",
        "1",
        "--nc",
        "2",
        "--runs",
        "200",
    ]);
    assert_eq!(code, EXIT_CHECK_FAILED);
}

#[test]
fn export_dot_targets() {
    for what in ["plant", "comm", "w"] {
        let (code, out, _) = run(&[
            "export-dot",
            &fixture("toy.json"),
            "--what",
            what,
            "--no",
            "1",
            "--nc",
            "2",
        ]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("digraph"));
    }
    let (_, out, _) = run(&[
        "export-dot",
        &fixture("toy.json"),
        "--what",
        "w",
        "--no",
        "1",
        "--nc",
        "2",
    ]);
    assert!(out.contains("(0 | ε | ε | 0)"));
}
