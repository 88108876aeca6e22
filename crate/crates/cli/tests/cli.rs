//! End-to-end runs of the binary against files on disk: exit codes, text
//! output, and the structured format.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use multitwist::families;
use multitwist::format::serialize_graph;

fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multitwist"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn check_accepts_a_bounding_pair_twist() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_file(
        dir.path(),
        "bp.sg",
        &serialize_graph(&families::bounding_pair(1, 1)),
    );
    let twist = write_file(dir.path(), "bp.mt", "twist C 1\ntwist D -1\n");
    let out = run(&["check", graph.to_str().unwrap(), "--twist", twist.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("member"));
}

#[test]
fn check_rejects_a_nonzero_theta_twist_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_file(
        dir.path(),
        "theta.sg",
        &serialize_graph(&families::theta(1, 1)),
    );
    let twist = write_file(dir.path(), "theta.mt", "twist C 1\ntwist D 1\ntwist E 1\n");
    let out = run(&["check", graph.to_str().unwrap(), "--twist", twist.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("not a member"));
    assert!(text.contains("3 necklace(s)"));
}

#[test]
fn malformed_input_exits_two_with_a_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_file(dir.path(), "bad.sg", "vertex a 0\nedge C a missing\n");
    let out = run(&["genus", graph.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn genus_of_the_one_vertex_loop_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_file(
        dir.path(),
        "loop.sg",
        &serialize_graph(&families::single_loop()),
    );
    let out = run(&["genus", graph.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "genus 1");
}

#[test]
fn rank_of_the_genus_five_pants_cycle_is_seven() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_file(
        dir.path(),
        "cycle.sg",
        &serialize_graph(&families::pants_cycle_with_leaves(5)),
    );
    let out = run(&["rank", graph.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("rank 7 "));
}

#[test]
fn structured_output_wraps_the_same_facts() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_file(
        dir.path(),
        "cycle.sg",
        &serialize_graph(&families::pants_cycle_with_leaves(5)),
    );
    let out = run(&["--format", "structured", "rank", graph.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["schema_version"], 1);
    assert_eq!(value["verb"], "rank");
    assert_eq!(value["report"]["rank"], 7);
    assert_eq!(value["report"]["basis"].as_array().unwrap().len(), 7);
}

#[test]
fn structured_check_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_file(
        dir.path(),
        "theta.sg",
        &serialize_graph(&families::theta(1, 1)),
    );
    let twist = write_file(dir.path(), "theta.mt", "twist C 2\n");
    let out = run(&[
        "--format",
        "structured",
        "check",
        graph.to_str().unwrap(),
        "--twist",
        twist.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["report"]["member"], false);
    assert_eq!(value["report"]["violations"].as_array().unwrap().len(), 1);
}

#[test]
fn validate_flags_a_disc_piece_in_system_mode() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_file(
        dir.path(),
        "disc.sg",
        "mode system\nvertex a 1\nvertex b 0\nedge C a b\n",
    );
    let out = run(&["validate", graph.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("invalid"));
}

#[test]
fn normalize_canonicalizes_and_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_file(
        dir.path(),
        "general.sg",
        "mode general\nvertex a 1\nvertex waist 0\nvertex plug 0\nedge C a waist\nedge D waist a\nedge E a plug\n",
    );
    let first = run(&["normalize", graph.to_str().unwrap()]);
    assert_eq!(code(&first), 0);
    let reduced = stdout(&first);
    assert!(reduced.contains("mode system"));
    assert!(!reduced.contains("plug"));
    let again_path = write_file(dir.path(), "reduced.sg", &reduced);
    let second = run(&["normalize", again_path.to_str().unwrap()]);
    assert_eq!(code(&second), 0);
    assert_eq!(stdout(&second), reduced);
}

#[test]
fn enumerate_counts_the_genus_two_census() {
    let out = run(&["enumerate", "--genus", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("# 6 graph(s)"));
    assert_eq!(text.matches("mode system").count(), 6);
}

#[test]
fn paths_report_blocked_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_file(
        dir.path(),
        "tree.sg",
        &serialize_graph(&families::separating_tree(3)),
    );
    let out = run(&["paths", graph.to_str().unwrap(), "--from", "t01", "--to", "t02"]);
    assert_eq!(code(&out), 1, "stdout: {}", stdout(&out));
    assert!(stdout(&out).contains("blocked"));
}

#[test]
fn bp_confirms_the_bounding_pair_necklace() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_file(
        dir.path(),
        "bp.sg",
        &serialize_graph(&families::bounding_pair(1, 1)),
    );
    let out = run(&["bp", graph.to_str().unwrap(), "--necklace", "C"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("bounding-pair shape"));
}

#[test]
fn verify_sweep_is_green_from_the_command_line() {
    let out = run(&["verify", "--genus", "2"]);
    assert_eq!(code(&out), 0, "stdout: {}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("all green"));
    assert!(text.contains("oracle-equivalence"));
}
