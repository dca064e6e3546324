//! Acceptance suite: each test pins one verified property of the engine at
//! its stated tolerance (exact unless noted) and prints a pass/fail line.
//! Suites are executed once and shared across the criteria that read them.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use prolrep_core::suites::{run_suite, Report, Status, SuiteParams};

fn suite(name: &'static str) -> &'static Report {
    static CACHE: OnceLock<std::sync::Mutex<BTreeMap<&'static str, &'static Report>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| std::sync::Mutex::new(BTreeMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(r) = guard.get(name) {
        return r;
    }
    let params = SuiteParams {
        seed: 1,
        jobs: 2,
        overrides: BTreeMap::new(),
    };
    let report = Box::leak(Box::new(run_suite(name, &params).expect("suite runs")));
    guard.insert(name, report);
    report
}

/// Asserts every claim with a matching prefix passed; returns how many
/// matched and a detail line.
fn require(report: &Report, prefix: &str, at_least: usize) -> String {
    let matched: Vec<_> = report
        .records
        .iter()
        .filter(|r| r.claim.starts_with(prefix))
        .collect();
    assert!(
        matched.len() >= at_least,
        "expected at least {at_least} claims under {prefix}, found {}",
        matched.len()
    );
    for r in &matched {
        assert!(
            r.status == Status::Pass,
            "claim {} failed: {}",
            r.claim,
            r.detail
        );
    }
    matched
        .iter()
        .map(|r| r.detail.clone())
        .collect::<Vec<_>>()
        .join("; ")
}

fn criterion(number: u32, name: &str, detail: &str) {
    println!("criterion {number:02} ({name}): PASS — {detail}");
}

#[test]
fn criterion_01_character_table_integrity() {
    let report = suite("wreath-chars");
    let detail = require(report, "wreath-chars/table-integrity/", 25);
    let five = report
        .records
        .iter()
        .find(|r| r.claim == "wreath-chars/table-integrity/wreath(c2,c2)")
        .expect("order-8 wreath table is in the corpus");
    assert!(five.detail.starts_with("5 irreducibles"), "{}", five.detail);
    criterion(
        1,
        "character-table integrity, exact orthogonality",
        &detail[..60.min(detail.len())],
    );
}

#[test]
fn criterion_02_wreath_restriction_invariants() {
    let report = suite("ideal-nilpotency");
    let detail = require(report, "ideal-nilpotency/wreath-restriction/", 3);
    criterion(2, "wreath restriction image and kernel l-th power", &detail);
}

#[test]
fn criterion_03_sylow_invariants() {
    let report = suite("sylow-invariants");
    let detail = require(report, "sylow-invariants/", 1);
    criterion(
        3,
        "iterated-wreath torus invariants, kernel index <= 4",
        &detail,
    );
}

#[test]
fn criterion_04_root_witnesses() {
    let report = suite("root-witness");
    let detail = require(report, "root-witness/constructive-identities", 1);
    // at least 100 random samples, exact identities
    let count: u64 = detail
        .split_whitespace()
        .next()
        .and_then(|w| w.parse().ok())
        .expect("detail starts with the sample count");
    assert!(count >= 100, "need at least 100 witnesses, got {count}");
    criterion(
        4,
        "constructive root identities on random invariants",
        &detail,
    );
}

#[test]
fn criterion_05_maindiagram_exponent() {
    let report = suite("maindiagram");
    let detail = require(report, "maindiagram/wreath-square", 1);
    require(report, "maindiagram/identity-square", 1);
    criterion(
        5,
        "ideal-power exponent at most 2 on the wreath square",
        &detail,
    );
}

#[test]
fn criterion_06_torsion_free_integer_form() {
    let report = suite("bar-lemmas");
    let detail = require(report, "bar-lemmas/torsion-three-way-agreement", 1);
    criterion(6, "three-way fixed-point agreement, exhaustive", &detail);
}

#[test]
fn criterion_07_heisenberg_scan() {
    let report = suite("ttf");
    let detail = require(report, "ttf/heisenberg-persistent-factor", 1);
    require(report, "ttf/free-abelian-no-persistent-factors", 1);
    criterion(
        7,
        "depth-4 tower scan: persistent divisor 2 only on Heisenberg",
        &detail,
    );
}

#[test]
fn criterion_08_blichfeldt_monomialization() {
    let report = suite("wreath-chars");
    let detail = require(report, "wreath-chars/blichfeldt-monomialization", 1);
    criterion(
        8,
        "every small-corpus irreducible induced from a linear character",
        &detail,
    );
}

#[test]
fn criterion_09_permutation_identities() {
    let report = suite("wreath-chars");
    let detail = require(report, "wreath-chars/permutation-identities", 1);
    criterion(
        9,
        "induced-trivial and induced-diagonal residuals vanish",
        &detail,
    );
}

#[test]
fn criterion_10_window_products() {
    let report = suite("ind-triviality");
    let detail = require(report, "ind-triviality/window-products", 1);
    criterion(
        10,
        "window products in (l) + I_G R[H] with length <= 4",
        &detail,
    );
}

#[test]
fn criterion_11_completion_sanity() {
    let report = suite("ideal-nilpotency");
    let detail = require(
        report,
        "ideal-nilpotency/completion-identity-for-l-groups",
        1,
    );
    require(report, "ideal-nilpotency/completion-prime-to-l", 1);
    require(report, "ideal-nilpotency/hat-restriction-injective", 1);
    criterion(
        11,
        "completions: identity on l-groups, collapse off l, injective to Sylow",
        &detail,
    );
}
