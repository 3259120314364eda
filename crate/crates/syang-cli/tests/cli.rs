use std::process::{Command, Output};

use serde_json::Value;

fn syang(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syang")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn cartan_matrix_of_eed() {
    let out = syang(&["roots", "cartan", "--word", "EED"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "syang/1");
    assert_eq!(v["matrix"], serde_json::json!([[2, -1], [-1, 0]]));
}

#[test]
fn reflection_hom_bounds() {
    let base = ["verify", "reflection-hom", "--word", "EEEDD", "--affine", "--index", "3"];
    let run = |l: &str| {
        let mut args = base.to_vec();
        args.extend(["--maxlen", l]);
        syang(&args)
    };
    // Bound starvation is inconclusive, never a violation.
    assert_eq!(run("2").status.code(), Some(2));
    // Four h~/x commutators need one more letter than L = 4 allows.
    let at4 = run("4");
    assert_eq!(at4.status.code(), Some(2));
    let entries = json(&at4)["report"]["entries"].as_array().unwrap().clone();
    let open: Vec<&str> = entries
        .iter()
        .filter(|e| e["verdict"] != "member")
        .map(|e| e["relation_label"].as_str().unwrap())
        .collect();
    assert_eq!(open, ["x-cartan-1[01;2,3]", "x-cartan-1[10;3,2]", "x-cartan-1[10;3,4]", "x-cartan-1[01;4,3]"]);
    let at5 = run("5");
    assert_eq!(at5.status.code(), Some(0));
    assert_eq!(json(&at5)["report"]["outcome"], "verified");
}

#[test]
fn output_is_byte_stable() {
    let args = ["verify", "reflection-hom", "--word", "EEEDD", "--affine", "--index", "0", "--maxlen", "5"];
    let a = syang(&args);
    let mut one = args.to_vec();
    one.extend(["--jobs", "1"]);
    let b = syang(&one);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn usage_and_input_errors_exit_3() {
    assert_eq!(syang(&["roots", "cartan"]).status.code(), Some(3));
    assert_eq!(syang(&["roots", "cartan", "--word", "EXD"]).status.code(), Some(3));
    assert_eq!(syang(&["frobnicate"]).status.code(), Some(3));
    let out = syang(&["normalize", "[x+(1,0),", "--word", "EED"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("offset 10"));
    assert_eq!(syang(&["verify", "coproduct-compat", "--word", "EED", "--index", "1"]).status.code(), Some(3));
    // m = n: the Cartan pairing is degenerate and there is no Casimir.
    assert_eq!(syang(&["verify", "correspondence", "--word", "EEDD"]).status.code(), Some(3));
}

#[test]
fn normalize_reduces_relations() {
    let out = syang(&["normalize", "[x+(1,0),x-(1,0)] - h(1,0) + [x+(1,0),x-(2,0)]", "--word", "EED"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["normal_form"], "0");
    assert_eq!(v["member"], true);
    let out = syang(&["normalize", "x+(1,0) @ x-(1,0)", "--word", "EED"]);
    assert_eq!(json(&out)["member"], false);
}

#[test]
fn small_verifications() {
    let ok = |args: &[&str]| {
        let out = syang(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    };
    ok(&["verify", "kac-moody", "--word", "EEDED", "--affine", "--loop-cutoff", "3"]);
    ok(&["verify", "kac-moody", "--word", "EED", "--index", "2"]);
    ok(&["verify", "correspondence", "--word", "EEDED"]);
    ok(&["verify", "coassoc", "--word", "EED"]);
    ok(&["verify", "drinfeld-lift", "--word", "EED", "--level-sum", "1"]);
    ok(&["weyl", "orbit", "--word", "EEEDD"]);
    ok(&["roots", "posroots", "--word", "EEEDD", "--affine", "--loop-cutoff", "1"]);
}

#[test]
fn orbit_size_and_serre_block() {
    let v = json(&syang(&["weyl", "orbit", "--word", "EEEDD"]));
    assert_eq!(v["node_count"], 10);
    let v = json(&syang(&["serre-block", "--word", "EEEDD", "--index", "3", "--rows", "2,3,4"]));
    assert_eq!(v["determinant"], 0);
}
