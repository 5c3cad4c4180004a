use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spoly")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn tmp(name: &str, contents: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn c(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn known_zero_is_falsified() {
    let out = spoly(&["stab", "(z1*z2)+1", "--domain", "halfplane:0", "--seed", "1"]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["verdict"], "falsified");
    let w = v["witness"].as_array().unwrap();
    let (a, b) = (c(&w[0]), c(&w[1]));
    assert!(a.1 > 0.0 && b.1 > 0.0);
    let prod = (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    assert!((prod.0 + 1.0).abs() < 1e-6 && prod.1.abs() < 1e-6, "{prod:?}");
}

#[test]
fn stable_product_is_certified_or_unknown() {
    let out = spoly(&["stab", "(z1+i)*(z2+i)", "--domain", "halfplane:0", "--budget", "512"]);
    assert!(matches!(code(&out), 0 | 2));
    assert_ne!(json(&out)["verdict"], "falsified");
}

#[test]
fn certify_mode_without_route_can_require_a_verdict() {
    let args = ["stab", "z1^2*z2+z3+3i", "--domain", "halfplane:0", "--mode", "certify"];
    let out = spoly(&args);
    assert_eq!(code(&out), 2);
    let mut strict = args.to_vec();
    strict.push("--require-verdict");
    assert_eq!(code(&spoly(&strict)), 4);
}

#[test]
fn apolar_example_pairs_to_zero() {
    let out = spoly(&["apolar", "z1+z2", "1", "--kappa", "1,1"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["abs"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn apolar_audit_flags_counterexample() {
    let out = spoly(&[
        "apolar", "z1+z2", "1", "--kappa", "1,1", "--audit", "disk-ext", "--domains", "disk:0,0,1",
    ]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["audit"]["pass"], false);
}

#[test]
fn verify_leeyang_passes() {
    let out = spoly(&["verify", "--suite", "leeyang", "--trials", "200", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["cases_run"], 200);
}

#[test]
fn verify_reports_are_byte_identical_across_thread_counts() {
    let a = spoly(&["verify", "--suite", "circle", "--trials", "12", "--seed", "5", "--threads", "1"]);
    let b = spoly(&["verify", "--suite", "circle", "--trials", "12", "--seed", "5"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unknown_suite_and_bad_input_exit_3() {
    assert_eq!(code(&spoly(&["verify", "--suite", "nope"])), 3);
    assert_eq!(code(&spoly(&["parse", "z1+*"])), 3);
    assert_eq!(code(&spoly(&["stab", "z1", "--domain", "wedge:1"])), 3);
    assert_eq!(code(&spoly(&["parse", "z1", "--tol", "-1"])), 3);
}

#[test]
fn parse_round_trips_through_json_file() {
    let out = spoly(&["parse", "2*z1^2*z2 - 3i"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let wire = serde_json::json!({ "nvars": v["nvars"], "terms": v["terms"] });
    let path = tmp("parse.json", &wire.to_string());
    let again = json(&spoly(&["parse", &format!("@{}", path.display())]));
    assert_eq!(again["text"], v["text"]);
    assert_eq!(v["degree"], serde_json::json!([2, 1]));
}

#[test]
fn eval_at_point() {
    let v = json(&spoly(&["eval", "z1*z2+1", "--at", "i;i"]));
    assert!(v["abs"].as_f64().unwrap() < 1e-15);
}

#[test]
fn multiplier_examples() {
    let out = spoly(&["multiplier", "--kappa", "3", "--lambda", "0,1,2,3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["report"]["verdict"], true);
    let out = spoly(&["multiplier", "--lambda", "1,0,1"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["report"]["verdict"], false);
}

#[test]
fn polarize_and_symbol() {
    let v = json(&spoly(&["op", "polarize", "z1^2", "--kappa", "2"]));
    assert_eq!(v["result"]["text"], "z1*z2");
    let out = spoly(&["symbol", "--op", "sym", "--kappa", "1,1", "--kind", "disk"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["symbol"]["nvars"], 4);
}

#[test]
fn lattice_commands() {
    let graph = tmp("k3.txt", "1 2 1\n1 3 1\n2 3 1\n");
    let g = graph.to_str().unwrap();
    let v = json(&spoly(&["matching", g]));
    assert_eq!(v["poly"]["terms"].as_array().unwrap().len(), 4);

    let v = json(&spoly(&["wagner", g, "--u", "matching"]));
    let roots = v["univariate_roots"].as_array().unwrap();
    assert_eq!(roots.len(), 1);
    assert!((c(&roots[0]).0 + 1.0 / 3.0).abs() < 1e-12);

    let coupling = tmp("j.csv", "0,0.4,0.1\n0.4,0,0.7\n0.1,0.7,0\n");
    let v = json(&spoly(&["ising", coupling.to_str().unwrap()]));
    assert!(v["max_circle_deviation"].as_f64().unwrap() <= 1e-7);

    let matrix = tmp("a.csv", "0.5,0.2+0.1i\n0.2-0.1i,-0.3\n");
    let out = spoly(&["circle", matrix.to_str().unwrap(), "--out", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("alpha,re,im\n"));
    let v = json(&spoly(&["circle", matrix.to_str().unwrap(), "--route", "direct"]));
    assert!(v["max_circle_deviation"].as_f64().unwrap() <= 1e-7);
}

#[test]
fn zeros_csv_to_file() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("zeros.csv");
    let out = spoly(&["zeros", "(1+z1)*(1+z2)", "--grid", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("param,root_re,root_im,root_abs"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    for r in rows {
        let re: f64 = r.split(',').nth(1).unwrap().parse().unwrap();
        assert!((re + 1.0).abs() < 1e-6);
    }
}
