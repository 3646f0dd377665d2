use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn cxtv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cxtv")).args(args).output().expect("run cxtv")
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_search_verify_and_plot_a_transversal() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "measures.json");
    let cert = path(dir.path(), "cert.json");
    let svg = path(dir.path(), "cert.svg");

    let out = cxtv(&["generate", "measures", "--d", "2", "--sizes", "8,9", "--seed", "3", "--out", s(&inst)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = cxtv(&["transversal", s(&inst), "--recheck", "--out", s(&cert)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let out = cxtv(&["verify", s(&cert), "--instance", s(&inst)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let out = cxtv(&["plot", s(&cert), "--out", s(&svg)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("<circle"));
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "measures.json");
    let cert = path(dir.path(), "cert.json");
    assert!(cxtv(&["generate", "measures", "--d", "2", "--sizes", "6,7", "--seed", "5", "--out", s(&inst)]).status.success());
    assert_eq!(cxtv(&["transversal", s(&inst), "--out", s(&cert)]).status.code(), Some(0));

    let mut json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let base = json.pointer_mut("/certificate/flat/base/0").expect("flat base in certificate");
    *base = serde_json::Value::String("1000/1".into());
    std::fs::write(&cert, serde_json::to_string(&json).unwrap()).unwrap();

    let out = cxtv(&["verify", s(&cert)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn tverberg_certificate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "tv.json");
    let cert = path(dir.path(), "tv_cert.json");
    let args = ["generate", "tverberg", "--d", "2", "--k", "1", "--parts", "2,2", "--seed", "0", "--out", s(&inst)];
    assert!(cxtv(&args).status.success());
    let out = cxtv(&["tverberg", s(&inst), "--out", s(&cert)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(cxtv(&["verify", s(&cert)]).status.code(), Some(0));
}

#[test]
fn exhausted_budget_exits_with_two_and_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "tv.json");
    let report = path(dir.path(), "report.json");
    let args = ["generate", "tverberg", "--d", "2", "--k", "1", "--parts", "2,2", "--seed", "1", "--out", s(&inst)];
    assert!(cxtv(&args).status.success());
    let out = cxtv(&["tverberg", s(&inst), "--budget", "4", "--out", s(&report)]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(json.is_object());
}

#[test]
fn fh_index_reports_the_contradiction() {
    let out = cxtv(&["fh-index", "--group", "circle", "--n", "2", "--d", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn cohomology_splitting_of_a_chern_class() {
    let out = cxtv(&["cohomology", "splitting", "--k", "2", "--class", "c1^2 - c2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!out.stdout.is_empty());
}

#[test]
fn wrong_flavor_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "tv.json");
    let args = ["generate", "tverberg", "--d", "2", "--k", "1", "--parts", "2,2", "--seed", "0", "--out", s(&inst)];
    assert!(cxtv(&args).status.success());
    assert_eq!(cxtv(&["tverberg-colorful", s(&inst)]).status.code(), Some(1));
}
