//! End-to-end checks of the binary: exit codes, report determinism, and the
//! table/orbit/witness dumps.

use std::path::PathBuf;
use std::process::{Command, Output};

fn prolrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prolrep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmpfile(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("prolrep-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn suite_exit_zero_on_pass() {
    let out = prolrep(&["maindiagram"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("2/2 claims passed"), "{text}");
}

#[test]
fn unknown_suite_exits_two() {
    let out = prolrep(&["not-a-suite"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_param_exits_two() {
    let out = prolrep(&["ttf", "--param", "depth"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let a = tmpfile("report-a.json");
    let b = tmpfile("report-b.json");
    for path in [&a, &b] {
        let out = prolrep(&[
            "filtration",
            "--seed",
            "42",
            "--jobs",
            "2",
            "--json",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let ja = std::fs::read(&a).unwrap();
    let jb = std::fs::read(&b).unwrap();
    assert_eq!(ja, jb, "same config and seed must give identical reports");
    let _ = std::fs::remove_file(a);
    let _ = std::fs::remove_file(b);
}

#[test]
fn chartab_wreath() {
    let out = prolrep(&["chartab", "wreath(c2,c2)"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["order"], 8);
    assert_eq!(v["irreducibles"].as_array().unwrap().len(), 5);
}

#[test]
fn chartab_trivial() {
    let out = prolrep(&["chartab", "cyclic(1)"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["irreducibles"].as_array().unwrap().len(), 1);
}

#[test]
fn chartab_parse_error() {
    let out = prolrep(&["chartab", "wreath(c2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse error at byte"), "{err}");
}

#[test]
fn orbits_two_classes() {
    let out = prolrep(&["orbits", "perm((1 2)(3 4))", "--param", "i=1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["orbit_count"], 2);
}

#[test]
fn witness_record_is_seeded_json() {
    let out = prolrep(&[
        "witness", "--param", "l=2", "--param", "n=2", "--param", "level=1", "--seed", "5",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 5);
    assert!(v["expression"].as_array().map_or(false, |a| !a.is_empty()));
    let again = prolrep(&[
        "witness", "--param", "l=2", "--param", "n=2", "--param", "level=1", "--seed", "5",
    ]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn config_file_feeds_params() {
    let cfg = tmpfile("config.txt");
    std::fs::write(&cfg, "# scan depth\ndepth=4\nindex_bound=2\n").unwrap();
    let out = prolrep(&["ttf", "--config", cfg.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let _ = std::fs::remove_file(cfg);
}
