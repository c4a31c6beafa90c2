use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn ainfty(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ainfty"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ainfty-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn validate_fixtures() {
    for name in ["strict.json", "a3_rationals.json", "a3_f2.json", "blocking_a3_f2.json", "blocking_f2.json"] {
        let out = ainfty(&["validate", &fixture(name)], None);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let r = report(&out);
        assert_eq!(r["d_squared_zero"], true);
        assert!(r["relations"].as_array().unwrap().iter().all(|v| v == true));
        assert_eq!(r["command"], "validate");
    }
}

#[test]
fn stdin_matches_file() {
    let path = fixture("a3_rationals.json");
    let text = std::fs::read_to_string(&path).unwrap();
    let a = ainfty(&["homology", &path], None);
    let b = ainfty(&["homology", "-"], Some(&text));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn input_errors_exit_2() {
    let out = ainfty(&["validate", "-"], Some("{ not json"));
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = ainfty(&["validate", "/nonexistent/instance.json"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = ainfty(&["convert", &fixture("strict.json"), "--from", "stasheff", "--to", "circle"], None);
    assert_eq!(out.status.code(), Some(2));
    // obstruct at r = 4 needs an A_4-structure
    let out = ainfty(&["obstruct", &fixture("a3_f2.json"), "--r", "4"], None);
    assert_eq!(out.status.code(), Some(2));
    let bad = r#"{"ring":"Q","convention":"circle","module":[{"degree":0,"dim":1},{"degree":1,"dim":1},{"degree":2,"dim":1}],
        "differential":[{"degree":1,"matrix":[["1"]]},{"degree":2,"matrix":[["1"]]}]}"#;
    let out = ainfty(&["validate", "-"], Some(bad));
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn blocking_fixture_exits_1() {
    let path = fixture("blocking_a3_f2.json");
    let out = ainfty(&["obstruct", &path], None);
    assert_eq!(out.status.code(), Some(0), "the class at r = 3 vanishes");
    let a4 = ainfty(&["obstruct", &fixture("blocking_f2.json")], None);
    assert_eq!(a4.status.code(), Some(1));
    let r = report(&a4);
    assert_eq!(r["class_zero"], false);
    assert_eq!(r["lifted"], Value::Null);
    assert_eq!(r["certificate"]["exhaustively_non_exact"], true);
    let out = ainfty(&["extend", &path, "--to", "6"], None);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["complete"], false);
    assert_eq!(r["r"], 4);
    assert_eq!(r["blocked"]["class_zero"], false);
    assert_eq!(r["blocked"]["class_closed"], true);
    assert_eq!(r["blocked"]["certificate"]["exhaustively_non_exact"], true);
}

#[test]
fn extend_writes_instance() {
    let out_path = temp_path("extended.json");
    let out = ainfty(&["extend", &fixture("a3_rationals.json"), "--to", "6", "--out", out_path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["complete"], true);
    let check = ainfty(&["check-ar", out_path.to_str().unwrap()], None);
    assert_eq!(check.status.code(), Some(0));
    let r = report(&check);
    assert_eq!(r["r"], 6);
    assert_eq!(r["relations"].as_array().unwrap().len(), 6);
}

#[test]
fn convert_round_trip_is_byte_identical() {
    let original = std::fs::read_to_string(fixture("a3_f2.json")).unwrap();
    let stasheff = ainfty(&["convert", "-", "--from", "circle", "--to", "stasheff"], Some(&original));
    assert_eq!(stasheff.status.code(), Some(0));
    let s1 = String::from_utf8(stasheff.stdout).unwrap();
    let circle = ainfty(&["convert", "-", "--from", "stasheff", "--to", "circle"], Some(&s1));
    let c = String::from_utf8(circle.stdout).unwrap();
    assert_eq!(c, original);
    let again = ainfty(&["convert", "-", "--from", "circle", "--to", "stasheff"], Some(&c));
    assert_eq!(String::from_utf8(again.stdout).unwrap(), s1);
    let suspended = ainfty(&["convert", "-", "--from", "stasheff", "--to", "suspended"], Some(&s1));
    let back = ainfty(&["convert", "-", "--from", "suspended", "--to", "circle"], Some(&String::from_utf8(suspended.stdout).unwrap()));
    assert_eq!(String::from_utf8(back.stdout).unwrap(), original);
}

#[test]
fn report_file_and_timing() {
    let path = temp_path("report.json");
    let out = ainfty(&["hochschild", &fixture("a3_rationals.json"), "--n", "2", "--i", "0", "--report", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["n"], 2);
    assert!(r.get("timing_ms").is_none());
    let timed = ainfty(&["validate", &fixture("strict.json"), "--timing"], None);
    assert!(report(&timed)["timing_ms"].is_number());
}

#[test]
fn check_prelie_passes() {
    let out = ainfty(&["check-prelie", &fixture("a3_f2.json"), "--trials", "30", "--seed", "3"], None);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["graded_system"]["failures"], 0);
    assert_eq!(r["weight_system"]["failures"], 0);
}

#[test]
fn strict_fixture_extends_by_zero() {
    let out = ainfty(&["extend", &fixture("strict.json"), "--to", "8", "--out", "-"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    // the instance comes first, then the report
    let inst: Value = serde_json::Deserializer::from_str(&text).into_iter::<Value>().next().unwrap().unwrap();
    let maps = inst["maps"].as_array().unwrap();
    assert_eq!(maps.last().unwrap()["arity"], 8);
    for m in maps.iter().filter(|m| m["arity"].as_u64().unwrap() >= 3) {
        assert!(m["terms"].as_array().unwrap().is_empty(), "{m}");
    }
}
