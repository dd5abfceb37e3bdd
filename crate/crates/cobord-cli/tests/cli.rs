//! End-to-end tests against the compiled binary.

use std::process::{Command, Output};

fn cobord(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cobord"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn nt_tables() {
    let out = cobord(&["nt", "mk", "--upto", "8", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "k,value\n1,2\n2,3\n3,2\n4,5\n5,1\n6,7\n7,2\n8,3\n"
    );
    let out = cobord(&["nt", "cases", "--upto", "8"]);
    let text = stdout(&out);
    assert!(text.contains("k=4: unsolvable (k = 2^2 = 5^1 - 1)"));
    assert!(text.contains("k=8: unsolvable (k = 2^3 = 3^2 - 1)"));
    assert!(text.contains("k=3: c = 1"));
}

#[test]
fn fgl_coefficient_table_csv() {
    let out = cobord(&[
        "fgl",
        "coeffs",
        "--format",
        "csv",
        "--order",
        "4",
        "--weight-cap",
        "4",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("i,j,coefficient\n"));
    assert!(text.contains("1,1,-b1\n"));
    assert!(text.contains("1,2,b1^2 - b2\n"));
}

#[test]
fn op_apply_and_compose() {
    let out = cobord(&["op", "apply", "--op", "d2", "--elem", "b1^2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "8");
    // ∂1 ∘ ∂1-composition through the structure constants is zero
    let out = cobord(&["op", "compose", "--f", "d3", "--g", "d1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn w_commands() {
    let out = cobord(&["w", "project", "--stong", "--elem", "b2"]);
    assert_eq!(stdout(&out).trim(), "9*b1^2 - 8*b2");
    let out = cobord(&["w", "multiply", "b1", "b1"]);
    assert_eq!(stdout(&out).trim(), "9*b1^2 - 8*b2");
    // multiplying outside ker Δ is a configuration error
    let out = cobord(&["w", "multiply", "b2", "b1"]);
    assert_eq!(out.status.code(), Some(2));
    // analyze at k=4 certifies the witness
    let out = cobord(&["w", "analyze", "--k", "4", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["coefficient_gcd"], "30");
    assert_eq!(json["kernel_gcd"], "10");
    assert_eq!(json["nongeneration_witness"], true);
}

#[test]
fn parse_errors_exit_with_two() {
    let out = cobord(&["op", "apply", "--op", "d2", "--elem", "b1 + $"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("position 5"));
    let out = cobord(&["fgl", "coeffs", "--order", "12"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_filtering_and_exit_codes() {
    let out = cobord(&["verify", "--only", "integer*"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("[pass] integer-lemmas"));
    assert!(text.contains("[skip] fgl-axioms"));
    // an invalid user projection makes the validity check fail (exit 1)
    let out = cobord(&[
        "verify",
        "--only",
        "projection*",
        "--projection",
        "d0 + b2*d2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("[FAIL] projection-validity"));
    assert!(text.contains("witness"));
}

#[test]
fn verify_json_is_deterministic() {
    let args = ["verify", "--only", "integer*", "--format", "json"];
    let a = cobord(&args);
    let b = cobord(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let json: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(json["config"]["order"], 10);
    let checks = json["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 15);
    // sorted by name
    let names: Vec<_> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}
