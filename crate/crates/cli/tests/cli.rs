use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tamewild"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    (
        serde_json::from_slice(&o.stdout).unwrap(),
        o.status.code().unwrap(),
    )
}

const COHN: &str = r#"[["1+u*v","v^2"],["-u^2","1-u*v"]]"#;
const NORMALIZER: &str = "s(1,1,-y); s(2,1,-x*z^2); s(1,1,y)";

#[test]
fn fox_prints_derivatives() {
    let o = run(&["fox", "z*x*z", "--var", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("(z)'⊗(z)"), "{}", stdout(&o));
}

#[test]
fn bad_input_exits_with_one() {
    assert_eq!(run(&["fox", "x*y", "--var", "9"]).status.code(), Some(1));
    assert_eq!(run(&["eps", "x +* y"]).status.code(), Some(1));
    assert_eq!(run(&["e2-decide", "[[\"1\"]]"]).status.code(), Some(1));
}

#[test]
fn demo_passes() {
    let o = run(&["demo-anick"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verdict: CertifiedWild"));
}

#[test]
fn corrupted_demo_fails_the_abelianization_step() {
    let o = run(&["demo-anick", "--corrupt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("failed step: pi(delta sigma) = id"));
}

#[test]
fn demo_json_contains_the_witness() {
    let (v, code) = json(&["demo-anick"]);
    assert_eq!(code, 0);
    let w = v["witness"].as_array().expect("witness present");
    assert_eq!(w.len(), 2);
    assert_eq!(v["certificate"]["verdict"], "NOT-IN");
}

#[test]
fn e2_decide_verdicts() {
    let (v, code) = json(&["e2-decide", COHN]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "NOT-IN");
    assert!(v["witness"].is_array());

    let (v, _) = json(&["e2-decide", r#"[["1","u^2*v"],["0","1"]]"#]);
    assert_eq!(v["verdict"], "IN");

    let (v, _) = json(&["e2-decide", "--ge2f", r#"[["0","1"],["1","0"]]"#]);
    assert_eq!(v["verdict"], "IN");
}

#[test]
fn certify_modes() {
    let o = run(&[
        "certify",
        "--mode",
        "theorem1",
        "--normalizer",
        NORMALIZER,
        "anick",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("status: CertifiedWild"));

    let o = run(&["certify", "--mode", "corollary2", "anick"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("status: CertifiedWild"));

    let (v, _) = json(&[
        "certify",
        "--mode",
        "corollary2",
        r#"{"images":["y","x","z"]}"#,
    ]);
    assert_eq!(v["status"], "TameWithDecomposition");
}

#[test]
fn certify_without_normalizer_names_the_coordinate() {
    let o = run(&["certify", "--mode", "theorem1", "anick"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("coordinate 1"), "{err}");
}

#[test]
fn compose_and_invert() {
    let o = run(&["invert", NORMALIZER]);
    assert!(o.status.success());
    let o = run(&["compose", "anick", NORMALIZER]);
    assert!(o.status.success());
    assert!(stdout(&o).contains('z'));
}

#[test]
fn selftest_is_deterministic() {
    let a = run(&["selftest", "--seed", "42"]);
    let b = run(&["selftest", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("all suites passed"));
}

#[test]
fn distinct_seeds_agree_on_verdicts() {
    let (a, _) = json(&["selftest", "--seed", "1"]);
    let (b, _) = json(&["selftest", "--seed", "2"]);
    let verdicts = |v: &Value| -> Vec<(String, u64)> {
        v["suites"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| {
                (
                    s["suite"].as_str().unwrap().to_string(),
                    s["failed"].as_u64().unwrap(),
                )
            })
            .collect()
    };
    assert_eq!(verdicts(&a), verdicts(&b));
    assert!(verdicts(&a).iter().all(|(_, failed)| *failed == 0));
}
