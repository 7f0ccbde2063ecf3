mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use common::*;
use rpoisson::symbolic::{parse_rational, parse_scalar, Chart, RationalPoint};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rpoisson")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn spec(name: &str) -> String {
    corpus_path(name).display().to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn untimed(out: &Output) -> String {
    let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v["timing_ms"] = Value::from(0);
    v.to_string()
}

fn write_temp(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn exit_codes_over_the_corpus() {
    let expected = [
        ("flat_r2", [0, 0, 0, 0, 0]),
        ("flat_r3_id", [0, 0, 0, 0, 0]),
        ("flat_r3_warped", [0, 0, 0, 0, 0]),
        ("twisted_r3", [1, 0, 1, 1, 0]),
        ("so3", [1, 0, 1, 1, 0]),
        ("nonpoisson", [1, 0, 1, 1, 1]),
    ];
    for (name, codes) in expected {
        let s = spec(name);
        let got = [
            code(&["check", &s]),
            code(&["christoffel", &s]),
            code(&["foliation", &s]),
            code(&["report", &s]),
            code(&["cohomology", &s, "--degree", "2"]),
        ];
        assert_eq!(got, codes, "{name}");
    }
}

#[test]
fn json_reports_are_deterministic() {
    for name in MANIFOLDS {
        let s = spec(name);
        for args in [vec!["--json", "check", &s], vec!["report", &s], vec!["--json", "christoffel", &s]] {
            let a = run(&args);
            let b = run(&args);
            assert_eq!(untimed(&a), untimed(&b), "{name} {args:?}");
        }
    }
}

fn parse_point(text: &str) -> RationalPoint {
    let inner = text.trim_start_matches('(').trim_end_matches(')');
    RationalPoint::new(inner.split(',').map(|c| parse_rational(c).unwrap()).collect())
}

#[test]
fn fail_witnesses_reevaluate_nonzero() {
    let mut seen = 0;
    for name in MANIFOLDS {
        let m = manifold(name);
        let chart = Chart::new(m.chart().names().to_vec()).unwrap();
        let report: Value = serde_json::from_slice(&run(&["--json", "check", &spec(name)]).stdout).unwrap();
        for c in report["checks"].as_array().unwrap() {
            if c["verdict"] != "fail" {
                continue;
            }
            let Some(w) = c.get("witness") else { continue };
            let expr = parse_scalar(w["expr"].as_str().unwrap(), &chart).unwrap();
            let point = parse_point(w["point"].as_str().expect("witness carries a point"));
            let value = expr.eval(&point).unwrap();
            assert!(!num_traits::Zero::is_zero(&value), "{name}: {w}");
            assert_eq!(value.to_string(), w["value"].as_str().unwrap());
            seen += 1;
        }
    }
    assert!(seen >= 3);
}

#[test]
fn twisted_witness_is_reported() {
    let out = run(&["check", &spec("twisted_r3")]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("riemann_poisson: fail"), "{text}");
    assert!(text.contains("witness Dpi(dx,dx,dz) = z+z^3"), "{text}");
}

#[test]
fn construct_verifies_valid_foliations() {
    for name in VALID_FOLIATIONS {
        let out = run(&["construct", &spec(name), "--verify"]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr(&out));
        let built = rpoisson::input::load_manifold(&String::from_utf8_lossy(&out.stdout)).unwrap();
        assert!(built.pi.is_poisson());
    }
}

#[test]
fn construct_rejects_invalid_foliations() {
    let out = run(&["construct", &spec("foliation_non_involutive")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[NotInvolutive]"), "{}", stderr(&out));
    let out = run(&["construct", &spec("foliation_invariance_fails"), "--verify"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[InvarianceFails]"), "{}", stderr(&out));
    assert!(stderr(&out).contains("2*z"));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let mut f: Value = serde_json::from_str(&corpus_text("foliation_flat")).unwrap();
    f.as_object_mut().unwrap().remove("omega");
    let missing = write_temp(dir.path(), "missing.json", &f.to_string());
    let out = run(&["construct", &missing]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[Schema]"), "{}", stderr(&out));

    let mut m: Value = serde_json::from_str(&corpus_text("flat_r3_id")).unwrap();
    m["pi"][0]["expr"] = Value::from("x+");
    let bad = write_temp(dir.path(), "bad.json", &m.to_string());
    let out = run(&["check", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("pi[0][1]"), "{}", stderr(&out));

    m["pi"][0]["expr"] = Value::from("1/(1+z^2)");
    let rational = write_temp(dir.path(), "rational.json", &m.to_string());
    assert_eq!(code(&["check", &rational]), 1);
    assert_eq!(code(&["cohomology", &rational]), 2);

    assert_eq!(code(&["check", "/nonexistent/spec.json"]), 2);
}

#[test]
fn samples_flag_replaces_the_spec_samples() {
    let dir = tempfile::tempdir().unwrap();
    let samples = write_temp(dir.path(), "samples.json", r#"[[0, 0, 1], ["1/3", 2, -2]]"#);
    let out = run(&["--json", "--samples", &samples, "check", &spec("twisted_r3")]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let w = report["checks"].as_array().unwrap().iter().find(|c| c["name"] == "riemann_poisson").unwrap();
    assert_eq!(w["witness"]["point"], "(0,0,1)");
    assert_eq!(w["witness"]["value"], "2");

    let wrong = write_temp(dir.path(), "wrong.json", "[[0, 0]]");
    assert_eq!(code(&["--samples", &wrong, "check", &spec("twisted_r3")]), 2);
}

#[test]
fn cohomology_reports_windows() {
    let out = run(&["cohomology", &spec("flat_r3_id"), "--p", "1", "--degree", "3", "--thm31"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("b1(window d=3) = 4"), "{text}");
    assert!(text.contains("thm31_dimensions: pass"), "{text}");
}
