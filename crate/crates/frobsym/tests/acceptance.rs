//! Acceptance gate: one test per bundled criterion, each printing a
//! single pass/fail line (run with `--nocapture` to see them) and
//! asserting both the verdict and the criterion's runtime budget.

use frobsym::selfcheck::{run_criterion, ACCEPTANCE_SEED};

fn check(index: usize, budget_ms: u128) {
    let result = run_criterion(index, ACCEPTANCE_SEED);
    println!("{result}");
    assert!(result.passed, "{result}");
    assert!(
        result.elapsed_ms < budget_ms,
        "criterion {index} took {} ms, budget {budget_ms} ms",
        result.elapsed_ms
    );
}

#[test]
fn criterion_01_definitional_equivalence() {
    check(1, 60_000);
}

#[test]
fn criterion_02_pairing_identity() {
    check(2, 120_000);
}

#[test]
fn criterion_03_hypergeometric_vanishing() {
    check(3, 1_000);
}

#[test]
fn criterion_04_egf_consistency() {
    check(4, 30_000);
}

#[test]
fn criterion_05_additivity() {
    check(5, 60_000);
}

#[test]
fn criterion_06_unit_padding() {
    check(6, 30_000);
}

#[test]
fn criterion_07_finite_round_trip() {
    check(7, 30_000);
}

#[test]
fn criterion_08_polynomial_round_trip() {
    check(8, 120_000);
}

#[test]
fn criterion_09_quotient_variety() {
    check(9, 30_000);
}

#[test]
fn criterion_10_idempotent_integrality() {
    check(10, 30_000);
}

#[test]
fn criterion_11_unit_tuple_factorial() {
    check(11, 5_000);
}
