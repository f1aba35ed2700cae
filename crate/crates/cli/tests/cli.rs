//! End-to-end tests of the command-line interface: file formats, round
//! trips, exit codes, and byte-identical output across worker counts.

use std::path::Path;
use std::process::{Command, Output};

fn bncg(args: &[&str], dir: &Path, workers: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bncg"));
    cmd.args(args).current_dir(dir);
    match workers {
        Some(w) => cmd.env("BNCG_WORKERS", w),
        None => cmd.env_remove("BNCG_WORKERS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn gen_writes_the_advertised_node_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = bncg(
        &["gen", "stretched-binary", "--d", "2", "--k", "3", "-o", "t.edges"],
        dir.path(),
        None,
    );
    assert!(out.status.success(), "{out:?}");
    let file = std::fs::read_to_string(dir.path().join("t.edges")).unwrap();
    assert_eq!(file.lines().next(), Some("19 18"));
    let meta: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(meta["metadata"]["n"], 19);
    assert_eq!(meta["metadata"]["depth"], 6);
}

#[test]
fn gen_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    assert!(bncg(&["gen", "star", "--n", "6", "-o", "s.edges"], dir.path(), None)
        .status
        .success());
    let out = bncg(&["check", "--concept", "bse", "--alpha", "5", "s.edges"], dir.path(), None);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["stable"], true);
    assert_eq!(report["concept"], "bse");
}

#[test]
fn both_file_formats_describe_the_same_graph() {
    let dir = tempfile::tempdir().unwrap();
    for (file, format) in [("g.edges", "edgelist"), ("g.json", "json")] {
        assert!(bncg(
            &["gen", "cycle", "--n", "5", "-o", file, "--format", format],
            dir.path(),
            None
        )
        .status
        .success());
    }
    let a = stdout(&bncg(&["poa", "--alpha", "2", "g.edges"], dir.path(), None));
    let b = stdout(&bncg(&["poa", "--alpha", "2", "g.json"], dir.path(), None));
    assert_eq!(a, b, "both formats must read back as the same graph");
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["fingerprint"], "5:0-3 0-4 1-2 1-4 2-3");
    assert!(a.contains("\"poa\""));
}

#[test]
fn outputs_are_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--suite", "hierarchy", "--nmax", "4"];
    let one = bncg(&args, dir.path(), Some("1"));
    let four = bncg(&args, dir.path(), Some("4"));
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);

    let args = ["atlas", "--nmax", "4", "--alphas", "1,2"];
    let one = bncg(&args, dir.path(), Some("1"));
    let four = bncg(&args, dir.path(), Some("4"));
    assert_eq!(one.stdout, four.stdout);
    assert!(stdout(&one).starts_with("n,alpha,fingerprint,"));
}

#[test]
fn budget_exhaustion_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    assert!(bncg(&["gen", "cycle", "--n", "6", "-o", "c.edges"], dir.path(), None)
        .status
        .success());
    let out = bncg(
        &["check", "--concept", "bse", "--alpha", "5", "--coalition-cap", "2", "c.edges"],
        dir.path(),
        None,
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["budget_exhausted"], true);
    assert_eq!(report["stable"], false);
}

#[test]
fn input_errors_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.edges"), "2 1\n0 0\n").unwrap();
    let out = bncg(&["check", "--concept", "re", "--alpha", "1", "bad.edges"], dir.path(), None);
    assert_eq!(out.status.code(), Some(1));
    let out = bncg(&["check", "--concept", "nope", "--alpha", "1", "bad.edges"], dir.path(), None);
    assert_eq!(out.status.code(), Some(1));
    let out = bncg(&["gen", "cycle", "--n", "2"], dir.path(), None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn witness_command_reports_the_separating_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = bncg(
        &[
            "witness",
            "--stable",
            "re",
            "--unstable",
            "bae",
            "--nmax",
            "4",
            "--alphas",
            "1",
            "--trees",
        ],
        dir.path(),
        None,
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["outcome"], "found");
    assert_eq!(v["alpha"], "1");
    assert_eq!(v["graph"]["n"], 4);
}

#[test]
fn dynamics_command_runs_to_stability() {
    let dir = tempfile::tempdir().unwrap();
    assert!(bncg(&["gen", "path", "--n", "4", "-o", "p.edges"], dir.path(), None)
        .status
        .success());
    let out = bncg(
        &[
            "dynamics",
            "--concept",
            "bae",
            "--alpha",
            "1/2",
            "--policy",
            "first-improvement",
            "--max-steps",
            "10",
            "p.edges",
        ],
        dir.path(),
        None,
    );
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["outcome"], "reached_stable");
    assert_eq!(v["report"]["stable"], true);
}

#[test]
fn unilateral_checks_accept_owner_lists() {
    let dir = tempfile::tempdir().unwrap();
    assert!(bncg(&["gen", "star", "--n", "5", "-o", "s.edges"], dir.path(), None)
        .status
        .success());
    // The center owns every edge.
    let out = bncg(
        &["check", "--concept", "uni-ne", "--alpha", "2", "--owners", "0,0,0,0", "s.edges"],
        dir.path(),
        None,
    );
    assert!(out.status.success(), "{out:?}");
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["stable"], true);
    // Owner lists are rejected for bilateral concepts.
    let out = bncg(
        &["check", "--concept", "re", "--alpha", "2", "--owners", "0,0,0,0", "s.edges"],
        dir.path(),
        None,
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_suite_rejects_unknown_names() {
    let dir = tempfile::tempdir().unwrap();
    let out = bncg(&["verify", "--suite", "no-such-suite"], dir.path(), None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn atlas_survey_mode_emits_the_survey_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = bncg(
        &["atlas", "--nmax", "5", "--survey", "re", "--class", "trees", "--alphas", "1,2"],
        dir.path(),
        None,
    );
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.starts_with("alpha,stable_count,budget_count,max_poa,argmax_fingerprint"));
    assert_eq!(text.lines().count(), 3);
}
