use serde_json::Value;
use std::process::Command;
use vecbkk_cli::run;

fn ok_json(args: &[&str]) -> Value {
    let out = run(std::iter::once("vecbkk").chain(args.iter().copied()));
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).expect("stdout is JSON")
}

fn code(args: &[&str]) -> i32 {
    run(std::iter::once("vecbkk").chain(args.iter().copied())).code
}

#[test]
fn count_sq2_is_one() {
    let v = ok_json(&["count", "@sq2"]);
    assert_eq!(v["count"], "1");
    assert_eq!(v["command"], "count");
    assert_eq!(v["algorithm"], "polarization");
}

#[test]
fn both_algorithms_count_the_same() {
    for name in ["@sq2", "@u23", "@u24", "@u23-matroid"] {
        let a = ok_json(&["--mvol", "polarization", "count", name]);
        let b = ok_json(&["--mvol", "recursive", "count", name]);
        assert_eq!(a["count"], b["count"], "{name}");
    }
}

#[test]
fn support_eval_u23() {
    let v = ok_json(&["support-eval", "@u23", "--xi", "1,0"]);
    assert_eq!(v["values"], serde_json::json!(["0", "1"]));
    assert_eq!(v["greedy_partial_sums"], v["values"]);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["count", "/nonexistent/input.json"]), 1);
    assert_eq!(code(&["count", "@no-such-fixture"]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["--mvol", "simplex", "count", "@sq2"]), 1);
    // hyp4 has rank 2 in dimension 3
    assert_eq!(code(&["count", "@hyp4"]), 2);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn errors_are_json_on_stderr() {
    let out = run(["vecbkk", "count", "@hyp4"]);
    let e: Value = serde_json::from_str(&out.stderr).unwrap();
    assert_eq!(e["class"], "precondition");
    assert!(out.stdout.is_empty());
}

#[test]
fn emitted_fixture_round_trips() {
    let dir = std::env::temp_dir().join(format!("vecbkk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sq2.json");
    let p = path.to_str().unwrap();
    ok_json(&["emit-fixture", "sq2", "--out", p]);
    let from_file = ok_json(&["count", p]);
    let built_in = ok_json(&["count", "@sq2"]);
    assert_eq!(from_file["count"], built_in["count"]);
    assert_eq!(from_file["inputs_digest"], built_in["inputs_digest"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn validate_fast_passes_on_small_fixtures() {
    for name in ["@sq2", "@u23", "@hyp4", "@hyp4-forms", "@u24", "@fano"] {
        let v = ok_json(&["--level", "fast", "validate", name]);
        assert_eq!(v["pass"], true, "{name}: {v}");
    }
}

#[test]
fn same_seed_same_output() {
    let a = run(["vecbkk", "--seed", "4", "--level", "fast", "validate", "@u23"]);
    let b = run(["vecbkk", "--seed", "4", "--level", "fast", "validate", "@u23"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn binary_propagates_exit_code() {
    let bin = env!("CARGO_BIN_EXE_vecbkk");
    let s = Command::new(bin).args(["count", "@hyp4"]).output().unwrap();
    assert_eq!(s.status.code(), Some(2));
    let s = Command::new(bin).args(["count", "@sq2"]).output().unwrap();
    assert_eq!(s.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&s.stdout).unwrap();
    assert_eq!(v["count"], "1");
}
