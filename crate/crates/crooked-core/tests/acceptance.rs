//! Acceptance gate: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use crooked_core::suites::{self, CheckResult, SuiteConfig};

fn gate(n: usize, result: CheckResult) {
    let verdict = if result.passed { "PASS" } else { "FAIL" };
    println!(
        "{verdict} criterion {n:2} [{}]: {}",
        result.name, result.detail
    );
    assert!(result.passed, "criterion {n} failed: {}", result.detail);
}

#[test]
fn criterion_01_kernel_identities() {
    gate(1, suites::check_kernel_identities(&SuiteConfig::default()));
}

#[test]
fn criterion_02_ideal_triangle_gram() {
    gate(2, suites::check_ideal_triangle_gram(&SuiteConfig::default()));
}

#[test]
fn criterion_03_structure_round_trip() {
    gate(3, suites::check_structure_round_trip(&SuiteConfig::default()));
}

#[test]
fn criterion_04_disjointness() {
    gate(4, suites::check_disjointness(&SuiteConfig::default()));
}

#[test]
fn criterion_05_margulis_three_way() {
    gate(5, suites::check_margulis_three_way(&SuiteConfig::default()));
}

#[test]
fn criterion_06_rank_one() {
    gate(6, suites::check_rank_one(&SuiteConfig::default()));
}

#[test]
fn criterion_07_tiling_combinatorics() {
    gate(7, suites::check_tiling_combinatorics(&SuiteConfig::default()));
}

#[test]
fn criterion_08_flip_covector() {
    gate(8, suites::check_flip_covector(&SuiteConfig::default()));
}

#[test]
fn criterion_09_fundamental_domains() {
    gate(9, suites::check_fundamental_domains(&SuiteConfig::default()));
}

#[test]
fn criterion_10_edge_quadrilaterals() {
    gate(10, suites::check_edge_quadrilaterals(&SuiteConfig::default()));
}

#[test]
fn criterion_11_farey_exact() {
    gate(11, suites::check_farey_exact(&SuiteConfig::default()));
}

#[test]
fn suites_fail_under_impossible_tolerance() {
    // The suites must actually measure something: an absurd tolerance
    // produces named failures, and rerunning with another seed does not
    // change any verdict.
    let cfg = SuiteConfig {
        tolerance_override: Some(1e-30),
        samples: 500,
        quadruples: 500,
        trials: 20,
        cit_trials: 20,
        farey_depth: 4,
        chart_depth: 3,
        tile_depth: 2,
        ..SuiteConfig::default()
    };
    let results = suites::run_all(&cfg);
    assert!(
        results.iter().any(|r| !r.passed),
        "tampered tolerance must fail at least one check"
    );
    for r in results.iter().filter(|r| !r.passed) {
        assert!(!r.name.is_empty());
    }

    let baseline = SuiteConfig {
        samples: 500,
        quadruples: 500,
        trials: 20,
        cit_trials: 20,
        farey_depth: 4,
        chart_depth: 3,
        tile_depth: 2,
        ..SuiteConfig::default()
    };
    let a = suites::run_all(&baseline);
    let b = suites::run_all(&SuiteConfig {
        seed: baseline.seed + 1,
        ..baseline.clone()
    });
    for (ra, rb) in a.iter().zip(b.iter()) {
        assert_eq!(ra.passed, rb.passed, "verdict for {} changed with the seed", ra.name);
    }
}
