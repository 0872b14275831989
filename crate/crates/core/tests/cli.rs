use std::process::{Command, Output};

fn ellid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellid"))
        .args(args)
        .env_remove("ELLID_CAP")
        .output()
        .expect("spawn ellid")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn eval_value(o: &Output) -> f64 {
    let text = stdout(o);
    let line = text
        .lines()
        .find(|l| l.starts_with("value"))
        .expect("value line");
    line.split('=').nth(1).unwrap().trim().parse().unwrap()
}

#[test]
fn check_expected_identity_exits_zero() {
    let o = ellid(&["check", "E4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o)
            .lines()
            .filter(|l| l.trim_end().ends_with("PASS"))
            .count(),
        3
    );
}

#[test]
fn unknown_identity_exits_two() {
    let o = ellid(&["check", "NOPE"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("NOPE"));
}

#[test]
fn contested_entry_with_failing_base_exits_zero() {
    let o = ellid(&["--format", "csv", "check", "P6b"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text
        .lines()
        .any(|l| l.starts_with("P6b,base,") && l.contains(",FAIL,")));
    assert!(text
        .lines()
        .any(|l| l.starts_with("P6b,minus-half,") && l.contains(",PASS,")));
}

#[test]
fn starved_series_break_expectation() {
    let o = ellid(&["--cap", "1", "check", "E4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("E4"));
}

#[test]
fn cap_from_environment_and_flag_precedence() {
    let bin = env!("CARGO_BIN_EXE_ellid");
    let env_only = Command::new(bin)
        .args(["check", "E4"])
        .env("ELLID_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(env_only.status.code(), Some(1));
    let flag_wins = Command::new(bin)
        .args(["--cap", "10000", "check", "E4"])
        .env("ELLID_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(flag_wins.status.code(), Some(0));
}

#[test]
fn list_shows_every_entry() {
    let all = stdout(&ellid(&["list"]));
    assert_eq!(all.lines().count(), 26);
    let one = stdout(&ellid(&["list", "P1"]));
    assert_eq!(one.lines().count(), 2);
    assert!(one.lines().nth(1).unwrap().starts_with("P1 "));
}

#[test]
fn eval_functions() {
    let k = ellid(&["eval", "K", "--k", "0.5"]);
    assert_eq!(k.status.code(), Some(0));
    assert!((eval_value(&k) - 1.685_750_354_812_596).abs() < 1e-14);
    let s = ellid(&["eval", "solve_k", "--a=1"]);
    assert!((eval_value(&s) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    assert_eq!(ellid(&["eval", "nope"]).status.code(), Some(2));
    assert_eq!(ellid(&["eval", "K"]).status.code(), Some(2));
}

#[test]
fn malformed_flags_exit_two() {
    for args in [
        &["--tol", "abc", "list"][..],
        &["--format", "xml", "list"],
        &["check", "E4", "--grid", "a"],
        &["check", "E4", "--grid", "b=3"],
        &["--tol", "-1", "check", "E4"],
        &["--parallel", "0", "check-all"],
        &["frobnicate"],
    ] {
        assert_eq!(ellid(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn grid_override_replaces_points() {
    let o = ellid(&["--format", "csv", "check", "E4", "--grid", "a=1.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("a=1.5000000000000000e0"));
}

#[test]
fn check_all_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let path = dir.path().join(name);
        let o = ellid(&[
            "--format",
            "json",
            "--parallel",
            threads,
            "--out",
            path.to_str().unwrap(),
            "check-all",
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
        std::fs::read(path).unwrap()
    };
    let a = run("a.json", "1");
    let b = run("b.json", "4");
    assert_eq!(a, b);
    let parsed: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(parsed.as_array().unwrap().len(), 230);
}

#[test]
fn check_all_only_filters() {
    let o = ellid(&[
        "--format",
        "csv",
        "check-all",
        "--only",
        "E4",
        "--only",
        "E5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(text
        .lines()
        .skip(1)
        .all(|l| l.starts_with("E4,") || l.starts_with("E5,")));
}
