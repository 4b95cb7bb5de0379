use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn group(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/groups")
        .join(format!("{name}.json"))
        .to_string_lossy()
        .into_owned()
}

fn solvword(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solvword"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    assert_eq!(text.trim_end().lines().count(), 1, "stderr: {text}");
    serde_json::from_str(text.trim_end()).unwrap()
}

#[test]
fn group_info_reports_order_and_flags() {
    let out = solvword(&["group", "info", &group("a5")]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["order"], "60");
    assert_eq!(v["solvable"], false);
    assert_eq!(v["simple"], true);
}

#[test]
fn commutator_probability_exact() {
    let out = solvword(&[
        "eval",
        "--group",
        &group("a5"),
        "--word",
        "[x1,x2]",
        "--exact",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["exact"]["reduced"], "1/12");
    assert_eq!(v["exact"]["num"], "300");
}

#[test]
fn monte_carlo_is_seeded() {
    let args = [
        "eval",
        "--group",
        &group("a5"),
        "--word",
        "x1^2",
        "--mc",
        "20000",
        "--seed",
        "3",
    ];
    let a = solvword(&args);
    let b = solvword(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let e = &stdout_json(&a)["estimate"];
    // x^2 = 1 for 16 of 60 elements; 0.02 is about six standard errors.
    assert!((e["p"].as_f64().unwrap() - 16.0 / 60.0).abs() < 0.02);
    assert!(e["lo"].as_f64().unwrap() <= e["p"].as_f64().unwrap());
}

#[test]
fn output_does_not_depend_on_jobs() {
    let base = ["synth", "solvable", "--group", &group("s4"), "-n", "2"];
    let one = solvword(&[&base[..], &["--jobs", "1"]].concat());
    let many = solvword(&[&base[..], &["--jobs", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);

    let base = [
        "eval",
        "--group",
        &group("a5"),
        "--word",
        "[x1,x2]",
        "--mc",
        "30000",
        "--seed",
        "1",
    ];
    let one = solvword(&[&base[..], &["--jobs", "1"]].concat());
    let many = solvword(&[&base[..], &["--jobs", "3"]].concat());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn synthesized_word_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("w.json");
    let out = solvword(&[
        "synth",
        "solvable",
        "--group",
        &group("a5"),
        "-n",
        "2",
        "-o",
        report.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());

    let out = solvword(&[
        "verify",
        "solvable",
        "--group",
        &group("a5"),
        "-n",
        "2",
        "--word",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["checked"], 3600);
    assert_eq!(v["passed"], true);

    let out = solvword(&[
        "eval",
        "--group",
        &group("a5"),
        "--word",
        report.to_str().unwrap(),
        "--exact",
    ]);
    assert_eq!(stdout_json(&out)["exact"]["reduced"], "11/30");
}

#[test]
fn failing_verification_exits_one() {
    let out = solvword(&[
        "verify",
        "solvable",
        "--group",
        &group("a5"),
        "-n",
        "2",
        "--word",
        "[x1,x2]",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["passed"], false);
    assert!(!v["counterexamples"].as_array().unwrap().is_empty());
}

#[test]
fn quotient_obstruction_exit_codes() {
    let obstructed = solvword(&[
        "check",
        "quotient-obstruction",
        "--group",
        &group("a5"),
        "-n",
        "2",
        "--word",
        "[x1,x2]",
    ]);
    // The commutator vanishes only on abelian pairs, none of which generate.
    assert_eq!(obstructed.status.code(), Some(0));
    // x1 = 1 only at the identity, which generates nothing.
    let trivial = solvword(&[
        "check",
        "quotient-obstruction",
        "--group",
        &group("a5"),
        "-n",
        "1",
        "--word",
        "x1",
    ]);
    assert_eq!(trivial.status.code(), Some(0));
    let open = solvword(&[
        "check",
        "quotient-obstruction",
        "--group",
        &group("s3"),
        "-n",
        "2",
        "--word",
        "x1^6",
    ]);
    assert_eq!(open.status.code(), Some(1));
}

#[test]
fn missing_group_file_is_input_error() {
    let out = solvword(&["group", "info", "/nonexistent/g.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "io");
}

#[test]
fn malformed_word_is_input_error() {
    let out = solvword(&["eval", "--group", &group("a5"), "--word", "x1*(", "--exact"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_json(&out)["message"].is_string());
}

#[test]
fn unknown_flag_is_input_error() {
    let out = solvword(&["eval", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "input");
}

#[test]
fn exceeding_the_exact_cap_exits_three() {
    let out = solvword(&[
        "eval",
        "--group",
        &group("a5"),
        "--word",
        "x1 x2 x3 x4 x5 x6",
        "--exact",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "cap_exceeded");
}

#[test]
fn probability_word_meets_its_lower_bound() {
    let out = solvword(&[
        "synth",
        "prob",
        "--group",
        &group("a5"),
        "-d",
        "2",
        "-k",
        "5",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["selected_satisfying"], 600);
    assert_eq!(v["exact_probability"]["reduced"], "1/4");
}

#[test]
fn monotonicity_check_on_s4() {
    let dir = tempfile::tempdir().unwrap();
    let kernel = dir.path().join("v4.json");
    std::fs::write(
        &kernel,
        r#"{"degree": 4, "generators": ["(0 1)(2 3)", "(0 2)(1 3)"]}"#,
    )
    .unwrap();
    let out = solvword(&[
        "check",
        "monotonicity",
        "--group",
        &group("s4"),
        "--kernel",
        kernel.to_str().unwrap(),
        "--word",
        "x1^2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    assert_eq!(v["inequality_holds"], true);
    assert_eq!(v["identity_holds"], true);
}
