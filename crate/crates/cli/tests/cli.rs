use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn sample(name: &str) -> String {
    let p: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../algebras").join(name);
    p.to_str().unwrap().to_string()
}

fn twistbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistbench"))
        .args(args)
        .env_remove("TWISTBENCH_MAX_SIZE")
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    twistbench(args).status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn remark_fails_monadic_godel_with_a_witness() {
    let o = twistbench(&["check", &sample("remark.alg"), "--suite", "monadic-godel"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL at G"), "{out}");
    assert!(out.contains("witness {x ↦ x, y ↦ y} left 1 right z"), "{out}");
}

#[test]
fn equiv_on_the_three_chain() {
    assert_eq!(code(&["equiv", &sample("three_chain.alg")]), 0);
    assert_eq!(code(&["equiv", &sample("kleene3.alg")]), 0);
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(code(&["check", "nofile.alg", "--suite", "heyting"]), 2);
    assert_eq!(code(&["check", &sample("remark.alg"), "--suite", "no-such-suite"]), 2);
    assert_eq!(code(&["check", &sample("m3.alg"), "--suite", "heyting"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    // a twist needs a Heyting implication
    assert_eq!(code(&["twist", &sample("kleene3.alg")]), 2);
    let o = twistbench(&["check", "nofile.alg", "--suite", "heyting"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("nofile.alg"));
}

#[test]
fn declared_kind_failure_is_a_suite_failure() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.alg");
    let src = fs::read_to_string(sample("remark.alg")).unwrap().replace("monadic-heyting", "monadic-godel");
    fs::write(&p, src).unwrap();
    let p = p.to_str().unwrap();
    assert_eq!(code(&["check", p, "--suite", "heyting"]), 1);
    assert_eq!(code(&["check", p, "--suite", "heyting", "--lenient"]), 0);
}

#[test]
fn twist_output_formats_reload() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["k.json", "k.alg"] {
        let out = dir.path().join(name);
        let out = out.to_str().unwrap();
        assert_eq!(code(&["twist", &sample("three_chain_monadic.alg"), "-o", out]), 0);
        assert_eq!(code(&["check", out, "--suite", "monadic-nelson"]), 0, "{name}");
        assert_eq!(code(&["center", out]), 0);
    }
}

#[test]
fn center_of_the_kleene_chain_is_the_two_chain() {
    let o = twistbench(&["center", &sample("kleene3.alg"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["elements"], serde_json::json!(["c", "1"]));
}

#[test]
fn congruences_with_oracle() {
    let o = twistbench(&["congruences", &sample("remark.alg"), "--oracle", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["oracle"]["agrees"], true);
    assert_eq!(code(&["con-iso", &sample("three_chain_monadic.alg")]), 0);
}

#[test]
fn quantifier_search_and_its_cap() {
    let o = twistbench(&[
        "search", "quantifiers", &sample("three_chain.alg"), "--mode", "subalgebra", "--filter", "monadic-godel", "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pairs"].as_array().unwrap().len(), 2);

    let capped = Command::new(env!("CARGO_BIN_EXE_twistbench"))
        .args(["search", "quantifiers", &sample("remark.alg"), "--mode", "raw", "--filter", "monadic-heyting"])
        .env("TWISTBENCH_MAX_SIZE", "4")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("cap 4"));
}

#[test]
fn counterexample_search_exit_codes() {
    let f = sample("remark.alg");
    assert_eq!(code(&["search", "counterexample", &f, "--formula", "forall x y. A (E x \\/ y) = E x \\/ A y"]), 1);
    assert_eq!(code(&["search", "counterexample", &f, "--formula", "forall x. A x <= x"]), 0);
    assert_eq!(code(&["search", "counterexample", &f, "--formula", "forall x. x ="]), 2);
}

#[test]
fn corpus_assertions() {
    assert_eq!(code(&["corpus", "--max-size", "4", "--assert", "monadic-nelson"]), 0);
    assert_eq!(code(&["corpus", "--max-size", "4", "--assert", "lemma24", "--on", "base"]), 0);
    // twists carry no Heyting implication, so the suite does not apply
    assert_eq!(code(&["corpus", "--max-size", "3", "--assert", "heyting", "--on", "twist"]), 2);
}

#[test]
fn export_round_trips_through_the_dsl() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("again.alg");
    let out = out.to_str().unwrap();
    assert_eq!(code(&["export", &sample("remark.alg"), "--format", "alg", "-o", out]), 0);
    let first = stdout(&twistbench(&["export", &sample("remark.alg")]));
    let second = stdout(&twistbench(&["export", out]));
    assert_eq!(first, second);
}

#[test]
fn json_output_is_stable() {
    let args = ["check", &sample("remark.alg"), "--suite", "monadic-godel", "--all-witnesses", "--json"];
    let (a, b) = (twistbench(&args), twistbench(&args));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["verdict"], "fail");
}
