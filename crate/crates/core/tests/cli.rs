//! End-to-end runs of the `epival` binary.

use std::path::Path;
use std::process::{Command, Output};

use epival::convexfn::{CellPA, MaxAffine};

const V: &str = r#"{"dim":2,"pieces":[{"slope":[1.0,0.0],"intercept":0.0},{"slope":[-1.0,0.5],"intercept":-0.2},{"slope":[0.0,-1.0],"intercept":0.1},{"slope":[0.5,0.5],"intercept":0.3}]}"#;

fn epival(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epival"))
        .args(args)
        .env_remove("EPIVAL_SEED")
        .output()
        .expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn conjugate_twice_returns_the_function() {
    let dir = tempfile::tempdir().unwrap();
    let (v, u, w) = (path(dir.path(), "v.json"), path(dir.path(), "u.json"), path(dir.path(), "w.json"));
    std::fs::write(&v, V).unwrap();
    assert_eq!(epival(&["fn", "conjugate", "--in", &v, "--out", &u]).status.code(), Some(0));
    assert_eq!(epival(&["fn", "conjugate", "--in", &u, "--out", &w]).status.code(), Some(0));
    let a: MaxAffine = serde_json::from_str(V).unwrap();
    let b: MaxAffine = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert!(a.approx_eq(&b, 1e-9));
    let _: CellPA = serde_json::from_str(&std::fs::read_to_string(&u).unwrap()).unwrap();
}

#[test]
fn decomposition_components_sum_to_value() {
    let dir = tempfile::tempdir().unwrap();
    let (v, u) = (path(dir.path(), "v.json"), path(dir.path(), "u.json"));
    std::fs::write(&v, V).unwrap();
    epival(&["fn", "conjugate", "--in", &v, "--out", &u]);
    let zeta = path(dir.path(), "z.json");
    std::fs::write(&zeta, r#"{"dim":2,"poly":{"0,0":1.0,"1,1":0.5},"rho":3.0,"k":2}"#).unwrap();
    let out = epival(&["decomp", "run", "--oracle", &format!("zeta:{zeta}"), "--fn", &u, "--n", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let j = json(&out);
    let sum: f64 = j["components"].as_array().unwrap().iter().map(|c| c.as_f64().unwrap()).sum();
    let direct = j["direct"].as_f64().unwrap();
    assert!((sum - direct).abs() <= 1e-10 * (1.0 + direct.abs()));
}

#[test]
fn floats_are_written_with_seventeen_digits() {
    let dir = tempfile::tempdir().unwrap();
    let v = path(dir.path(), "v.json");
    std::fs::write(&v, V).unwrap();
    let out = epival(&["fn", "eval", "--in", &v, "--at", "0.1,0.2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("e-1") || text.contains("e0"), "{text}");
    let mantissa = text.split(':').nth(1).unwrap().split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
}

#[test]
fn exit_codes_by_failure_class() {
    assert_eq!(epival(&["fn", "conjugate", "--no-such-flag"]).status.code(), Some(3));
    let missing = epival(&["fn", "conjugate", "--in", "/definitely/missing.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.json");
    std::fs::write(&bad, r#"{"dim":1,"pieces":[]}"#).unwrap();
    assert_eq!(epival(&["fn", "conjugate", "--in", &bad]).status.code(), Some(3));
    assert_eq!(epival(&["repro", "99"]).status.code(), Some(3));
}

#[test]
fn nonconvex_minimum_is_a_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.json"), path(dir.path(), "b.json"));
    std::fs::write(&a, r#"{"dim":1,"pieces":[{"slope":[1.0],"intercept":0.0}]}"#).unwrap();
    std::fs::write(&b, r#"{"dim":1,"pieces":[{"slope":[-1.0],"intercept":0.0}]}"#).unwrap();
    assert_eq!(epival(&["fn", "min", "--in", &a, &b]).status.code(), Some(5));
    assert_eq!(epival(&["fn", "max", "--in", &a, &b]).status.code(), Some(0));
}

#[test]
fn suites_report_and_controls_invert() {
    let ok = epival(&["suite", "valuation", "--n", "1", "--cases", "30", "--seed", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["cases"], 30);
    let control = epival(&["suite", "valuation", "--oracle", "sqvol", "--cases", "30"]);
    assert_eq!(control.status.code(), Some(0));
    assert!(!json(&control)["failures"].as_array().unwrap().is_empty());
    let strict = epival(&["suite", "inclexcl", "--oracle", "sqvol", "--m", "3", "--cases", "10", "--tolerance", "1e-8"]);
    assert_eq!(strict.status.code(), Some(0));
    let cont = epival(&["suite", "continuity", "--oracle", "cellcount"]);
    assert_eq!(cont.status.code(), Some(0));
    assert_eq!(json(&cont)["converged"], false);
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = epival(&["suite", "valuation", "--cases", "25", "--seed", "11"]);
    let b = epival(&["suite", "valuation", "--cases", "25", "--seed", "11", "--workers", "1"]);
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_epival"))
        .args(["suite", "valuation", "--cases", "25"])
        .env("EPIVAL_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn growth_and_coercive_sweeps_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "g.csv");
    let out = epival(&["suite", "growth", "--n", "1", "--csv", &csv]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["c1"].as_f64().unwrap() > 0.1);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 8);
    let cone = epival(&["suite", "coercive", "--y", "1,0.5", "--rays", "1,0;0.3,1", "--radii", "1,2"]);
    assert_eq!(cone.status.code(), Some(0), "{}", String::from_utf8_lossy(&cone.stderr));
}

#[test]
fn run_configuration_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "cfg.json");
    let out = epival(&["--dump-config", &cfg, "repro", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let c: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cfg).unwrap()).unwrap();
    assert!(c["command"]["Repro"]["seed"].is_number());
}
