//! End-to-end tests of the `nf` binary: subcommands, formats, exit codes.

use std::process::Command;

fn nf(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_nf"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn compute_json_matches_library() {
    let out = nf(&[
        "compute",
        "-p",
        "3",
        "-n",
        "1,1,2,1,1",
        "--g0",
        "0",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["genus"], 3);
    assert_eq!(v["trace"], "-3");
    assert_eq!(v["order"], 3);
    let m = sympnf::matrix::IntMatrix::from_json(&v["matrix"]).unwrap();
    let r = sympnf::normal_form::normal_form(3, &[1, 1, 2, 1, 1], 0).unwrap();
    assert_eq!(m, r.matrix);
}

#[test]
fn compute_text_and_trace() {
    let out = nf(&[
        "compute",
        "-p",
        "3",
        "-n",
        "1,1,2,1,1",
        "--g0",
        "0",
        "--trace-steps",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("order = 3"));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 3, "one trace record per iteration");
    assert!(err
        .lines()
        .all(|l| serde_json::from_str::<serde_json::Value>(l).is_ok()));
}

#[test]
fn compute_free_action() {
    let out = nf(&["compute", "-p", "3", "--g0", "2", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["genus"], 4);
    assert_eq!(v["trace"], "2");
}

#[test]
fn enumerate_csv() {
    let out = nf(&["enumerate", "-g", "2", "-p", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p,g0,t,n,genus,power,trace,order,symplectic");
    assert_eq!(lines[1], "2,0,6,1;1;1;1;1;1,2,1,-4,2,true");
    assert_eq!(lines[2], "2,1,2,1;1,2,1,0,2,true");
}

#[test]
fn enumerate_all_primes() {
    let out = nf(&["enumerate", "-g", "2", "--all-primes"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // g = 2 admits classes for p in {2, 3, 5}: the classical counts
    assert!(text.lines().any(|l| l.starts_with("3,0,4,1;1;2;2")));
    assert!(text.lines().any(|l| l.starts_with("5,0,3,")));
    assert!(!text.contains("\n7,"));
}

#[test]
fn presentation_grammar() {
    let out = nf(&["presentation", "-p", "3", "-n", "1,1,2,1,1", "--g0", "0"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["generators"].as_array().unwrap().len(), 6);
    assert_eq!(v["relation"][0], "Y:3:1");
    assert_eq!(v["qhat"].as_array().unwrap().len(), 0);
    assert_eq!(v["lrhat"].as_array().unwrap().len(), 12);
}

#[test]
fn intersection_grid() {
    let out = nf(&[
        "intersection",
        "-p",
        "3",
        "-n",
        "1,1,2,1,1",
        "--g0",
        "0",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let m = sympnf::matrix::IntMatrix::from_json(&v).unwrap();
    assert_eq!(m.rows(), 6);
    assert_eq!(m.to_json()[0][1], "1");
}

#[test]
fn check_subcommand_and_matrix_files() {
    let dir = std::env::temp_dir().join(format!("nf-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("neg_id4.json");
    let m = sympnf::matrix::IntMatrix::identity(4).neg();
    std::fs::write(&path, serde_json::to_string(&m.to_json()).unwrap()).unwrap();
    let out = nf(&["check", "--matrix", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["order"], 2);
    assert_eq!(v["verdict"], "matches-normal-form-invariants");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    // validation error: sum not divisible
    let out = nf(&["compute", "-p", "3", "-n", "1,1", "--g0", "0"]);
    assert_eq!(out.status.code(), Some(2));
    // validation error: not prime
    let out = nf(&["compute", "-p", "6", "-n", "1,5", "--g0", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // check with a non-prime-order matrix: rejected input
    let dir = std::env::temp_dir().join(format!("nf-cli-exit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("j.json");
    let j = sympnf::matrix::standard_j(0, 1);
    std::fs::write(&path, serde_json::to_string(&j.to_json()).unwrap()).unwrap();
    let out = nf(&["check", "--matrix", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}
