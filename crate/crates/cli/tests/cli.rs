//! End-to-end tests of the `hankelfiber` binary: output shapes, exit
//! codes, and report reproducibility.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hankelfiber"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn hankel_print_matches_section() {
    let out = run(&["hankel", "print", "--n", "2", "--r", "1", "--shape", "rect"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "x1, x2, x3, x4\nx2, x3, x4, 0\n");
}

#[test]
fn hankel_minors_emits_json_table() {
    let out = run(&["hankel", "minors", "--n", "2", "--r", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["[1,2]"], "-x2^2 + x1*x3");
    assert_eq!(v["[3,4]"], "-x4^2");
    assert_eq!(v.as_object().unwrap().len(), 6);
}

#[test]
fn grass_plucker_classical_quadric() {
    let out = run(&["grass", "plucker", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        "T[1,4]*T[2,3] - T[1,3]*T[2,4] + T[1,2]*T[3,4]"
    );
}

#[test]
fn grass_poset_dot_output() {
    let out = run(&["grass", "poset", "--n", "4", "--format", "dot"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("digraph"));
    assert!(text.contains("\"[1,2,3,4]\" -> \"[1,2,3,5]\""));
}

#[test]
fn laplace_lap_paper_example() {
    let out = run(&["laplace", "lap", "--n", "4", "--a", "5,6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("T[2,4,5,6]^2"));
    // exact polynomial, canonical order
    assert_eq!(
        text.trim(),
        "-T[2,4,5,6]^2 + T[1,4,5,6]*T[3,4,5,6] + T[2,3,5,6]*T[3,4,5,6]"
    );
}

#[test]
fn laplace_flap_json_metadata() {
    let out = run(&["laplace", "flap", "--n", "3", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["term_count"], 13);
    assert_eq!(v["degree"], 3);
    assert!(v["normalization"].as_str().unwrap().contains("-1"));
}

#[test]
fn fiber_report_json() {
    let out = run(&["fiber", "report", "--n", "2", "--r", "1", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["hilbert"]["krull_dim"], 4);
    assert_eq!(v["hilbert"]["multiplicity"], 4);
}

#[test]
fn fiber_kernel_lists_basis() {
    let out = run(&["fiber", "kernel", "--n", "2", "--r", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.trim().lines().count(), 2, "two quadrics: {text}");
}

#[test]
fn syz_birational_json_verdict() {
    let out = run(&[
        "syz",
        "birational",
        "--target",
        "minors",
        "--n",
        "3",
        "--r",
        "2",
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "birational-certified");
    assert_eq!(v["linear_syzygy_rank"], 9);
}

#[test]
fn syz_rees_n2() {
    let out = run(&["syz", "rees", "--n", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("fiber type: yes"));
}

#[test]
fn suite_rejects_n1_with_exit_2() {
    let out = run(&["suite", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("n >= 2"), "stderr: {err}");
}

#[test]
fn suite_budget_one_pair_marks_kernel_not_determined() {
    let out = run(&[
        "suite",
        "--n",
        "2",
        "--suites",
        "kernel",
        "--budget-pairs",
        "1",
    ]);
    assert!(out.status.success(), "not-determined is not a failure");
    let text = stdout(&out);
    assert!(text.contains("not-determined"), "{text}");
}

#[test]
fn suite_reports_are_byte_identical() {
    let args = [
        "suite", "--n", "2", "--suites", "relations,fiber", "--format", "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
}

#[test]
fn suite_writes_report_file() {
    let dir = std::env::temp_dir().join("hankelfiber-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let out = run(&[
        "suite",
        "--n",
        "2",
        "--suites",
        "relations",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let content = std::fs::read_to_string(&path).unwrap();
    assert!(content.starts_with("case_id,status,wall_ms"));
    std::fs::remove_file(&path).ok();
}
