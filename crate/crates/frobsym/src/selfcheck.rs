//! The bundled acceptance suite: eleven numbered, seeded, deterministic
//! criteria exercising the whole crate end to end.
//!
//! Each criterion is a pure function returning a [`CriterionResult`]; the
//! CLI `selfcheck` command and the acceptance integration tests share
//! them. All randomness is drawn from a caller-supplied seed, so a given
//! seed always reruns the same cases.

use std::fmt;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::frobenius::{
    certify_frobenius, egf_coefficients, phi_auto, phi_diagonal_series, phi_inductive,
    phi_one_padding, phi_partition, phi_permutation, DEFAULT_TOLERANCE,
};
use crate::functional::{
    evaluation_functional, FiniteFunctional, Functional, LabelMultiset, MomentFunctional,
    PointMultiset,
};
use crate::partitions::{coefficient_polynomial_at_one, verify_pairing_identity};
use crate::polynomial::{all_monomials_up_to_degree, Polynomial};
use crate::reconstruct::{
    decompose_finite, decompose_polynomial, decompose_quotient, DecomposeOptions,
};
use crate::scalar::{GaussianRational, Scalar};

/// Seed used by the CLI and the acceptance tests.
pub const ACCEPTANCE_SEED: u64 = 0x5EED;

/// Number of criteria in the suite.
pub const CRITERIA_COUNT: usize = 11;

type Q = GaussianRational;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    /// 1-based criterion number.
    pub index: usize,
    /// Short kebab-case name.
    pub name: &'static str,
    pub passed: bool,
    /// How many individual cases were checked.
    pub cases: usize,
    /// Human-readable summary, or the first counterexample on failure.
    pub detail: String,
    pub elapsed_ms: u128,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:2} ({}): {} — {} ({} cases, {} ms)",
            self.index,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail,
            self.cases,
            self.elapsed_ms
        )
    }
}

/// Runs every criterion in order.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    (1..=CRITERIA_COUNT)
        .map(|i| run_criterion(i, seed))
        .collect()
}

/// Runs one criterion (1-based index; panics on an out-of-range index).
pub fn run_criterion(index: usize, seed: u64) -> CriterionResult {
    let (name, body): (&'static str, fn(u64) -> Outcome) = match index {
        1 => ("definitional-equivalence", criterion_equivalence),
        2 => ("pairing-identity", criterion_pairing_identity),
        3 => ("hypergeometric-vanishing", criterion_hypergeometric),
        4 => ("egf-consistency", criterion_egf),
        5 => ("additivity", criterion_additivity),
        6 => ("unit-padding", criterion_padding),
        7 => ("finite-round-trip", criterion_finite_round_trip),
        8 => ("polynomial-round-trip", criterion_polynomial_round_trip),
        9 => ("quotient-variety", criterion_quotient),
        10 => ("idempotent-integrality", criterion_idempotents),
        11 => ("unit-tuple-factorial", criterion_unit_factorial),
        other => panic!("no criterion {other}; valid range is 1..={CRITERIA_COUNT}"),
    };
    let start = Instant::now();
    let outcome = body(seed);
    let elapsed_ms = start.elapsed().as_millis();
    match outcome {
        Ok((cases, detail)) => CriterionResult {
            index,
            name,
            passed: true,
            cases,
            detail,
            elapsed_ms,
        },
        Err(detail) => CriterionResult {
            index,
            name,
            passed: false,
            cases: 0,
            detail,
            elapsed_ms,
        },
    }
}

// On success: (cases checked, summary). On failure: first counterexample.
type Outcome = Result<(usize, String), String>;

// ---------------------------------------------------------------------------
// randomness helpers
// ---------------------------------------------------------------------------

fn case_rng(seed: u64, salt: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn random_rational(rng: &mut ChaCha20Rng) -> BigRational {
    let num = rng.gen_range(-9i64..=9);
    let den = rng.gen_range(1i64..=4);
    BigRational::new(num.into(), den.into())
}

fn random_real(rng: &mut ChaCha20Rng) -> Q {
    Q::from_rational(random_rational(rng))
}

fn random_gaussian(rng: &mut ChaCha20Rng) -> Q {
    Q::new(random_rational(rng), random_rational(rng))
}

fn random_moments(rng: &mut ChaCha20Rng, num_vars: usize, bound: u32) -> MomentFunctional<Q> {
    let moments = all_monomials_up_to_degree(num_vars, bound)
        .into_iter()
        .map(|m| (m, random_real(rng)))
        .collect();
    MomentFunctional::new(num_vars, bound, moments).expect("table is complete by construction")
}

fn random_sparse_poly(rng: &mut ChaCha20Rng, num_vars: usize, max_degree: u32) -> Polynomial<Q> {
    let monomials = all_monomials_up_to_degree(num_vars, max_degree);
    let terms = rng.gen_range(1..=3usize);
    let mut p = Polynomial::zero(num_vars);
    for _ in 0..terms {
        let m = monomials[rng.gen_range(0..monomials.len())].clone();
        p = p.add(&Polynomial::from_terms(num_vars, [(m, random_real(rng))]));
    }
    p
}

fn random_finite(rng: &mut ChaCha20Rng, dim: usize) -> FiniteFunctional<Q> {
    let labels = (0..dim).map(|i| format!("x{i}")).collect();
    let values = (0..dim).map(|_| random_real(rng)).collect();
    FiniteFunctional::new(labels, values).expect("labels are distinct by construction")
}

fn small_coordinate(rng: &mut ChaCha20Rng) -> Q {
    let num = rng.gen_range(-3i64..=3);
    let den = rng.gen_range(1i64..=2);
    Q::from_ratio(num, den)
}

fn factorial_scalar(n: usize) -> Q {
    let mut acc = Q::one();
    for k in 2..=n {
        acc = acc * Q::from_i64(k as i64);
    }
    acc
}

// ---------------------------------------------------------------------------
// 1. the three transform definitions agree
// ---------------------------------------------------------------------------

fn criterion_equivalence(seed: u64) -> Outcome {
    let mut rng = case_rng(seed, 1);
    let total = 200;
    for case in 0..total {
        let num_vars = rng.gen_range(1..=3usize);
        let k = rng.gen_range(1..=6usize);
        // argument degrees <= 2, capped in total so the moment table stays
        // small; the full product of all k arguments must stay in scope
        let mut budget = 8u32;
        let degrees: Vec<u32> = (0..k)
            .map(|_| {
                let d = rng.gen_range(0..=2u32).min(budget);
                budget -= d;
                d
            })
            .collect();
        let bound = degrees.iter().sum::<u32>().max(1);
        let f = random_moments(&mut rng, num_vars, bound);
        let args: Vec<Polynomial<Q>> = degrees
            .iter()
            .map(|&d| random_sparse_poly(&mut rng, num_vars, d))
            .collect();
        let by_permutation = phi_permutation(&f, &args).map_err(|e| format!("case {case}: {e}"))?;
        let by_partition = phi_partition(&f, &args).map_err(|e| format!("case {case}: {e}"))?;
        let by_induction = phi_inductive(&f, &args).map_err(|e| format!("case {case}: {e}"))?;
        if by_permutation != by_partition || by_partition != by_induction {
            return Err(format!(
                "case {case} (k = {k}, {num_vars} vars): permutation {by_permutation}, \
                 partition {by_partition}, inductive {by_induction}"
            ));
        }
    }
    Ok((total, "three evaluation routes agree exactly".into()))
}

// ---------------------------------------------------------------------------
// 2. gluing identity over partial pairings
// ---------------------------------------------------------------------------

fn criterion_pairing_identity(_seed: u64) -> Outcome {
    let mut cases = 0;
    for a in 1..=4usize {
        for b in 1..=4usize {
            let report = verify_pairing_identity(a, b).map_err(|e| format!("({a},{b}): {e}"))?;
            if !report.equal {
                let diff = report
                    .first_difference
                    .map(|d| {
                        format!(
                            "{} has {} vs {}",
                            d.partition, d.lhs_coefficient, d.rhs_coefficient
                        )
                    })
                    .unwrap_or_default();
                return Err(format!("({a},{b}) differs: {diff}"));
            }
            cases += 1;
        }
    }
    Ok((cases, "gluing identity holds for all sides up to 4".into()))
}

// ---------------------------------------------------------------------------
// 3. hypergeometric vanishing
// ---------------------------------------------------------------------------

fn criterion_hypergeometric(_seed: u64) -> Outcome {
    let mut cases = 0;
    for m in 1..=8usize {
        for n in 1..=8usize {
            let value = coefficient_polynomial_at_one(m, n);
            if !value.is_zero() {
                return Err(format!("P({m},{n}) at 1 is {value}, expected 0"));
            }
            cases += 1;
        }
    }
    Ok((cases, "alternating binomial sum vanishes".into()))
}

// ---------------------------------------------------------------------------
// 4. diagonal recursion matches the exponential generating function
// ---------------------------------------------------------------------------

fn criterion_egf(seed: u64) -> Outcome {
    let mut rng = case_rng(seed, 4);
    let total = 100;
    for case in 0..total {
        let n_max = rng.gen_range(1..=8usize);
        let (diagonal, egf) = if case % 2 == 0 {
            let num_vars = rng.gen_range(1..=2usize);
            let degree = rng.gen_range(1..=2u32);
            let bound = n_max as u32 * degree;
            let f = random_moments(&mut rng, num_vars, bound);
            let a = random_sparse_poly(&mut rng, num_vars, degree);
            (
                phi_diagonal_series(&f, &a, n_max).map_err(|e| format!("case {case}: {e}"))?,
                egf_coefficients(&f, &a, n_max).map_err(|e| format!("case {case}: {e}"))?,
            )
        } else {
            let dim = rng.gen_range(1..=4usize);
            let f = random_finite(&mut rng, dim);
            let a: Vec<Q> = (0..dim).map(|_| random_real(&mut rng)).collect();
            (
                phi_diagonal_series(&f, &a, n_max).map_err(|e| format!("case {case}: {e}"))?,
                egf_coefficients(&f, &a, n_max).map_err(|e| format!("case {case}: {e}"))?,
            )
        };
        if diagonal != egf {
            return Err(format!(
                "case {case} (N = {n_max}): recursion {diagonal:?} vs series {egf:?}"
            ));
        }
    }
    Ok((
        total,
        "diagonal recursion equals exp of the log series".into(),
    ))
}

// ---------------------------------------------------------------------------
// 5. additivity of degrees under sums of functionals
// ---------------------------------------------------------------------------

fn criterion_additivity(seed: u64) -> Outcome {
    let mut rng = case_rng(seed, 5);
    let mut cases = 0;
    for m in 1..=3u64 {
        for n in 1..=3u64 {
            for rep in 0..3 {
                let bound = (m + n + 1) as u32;
                let left = random_gaussian_evaluation(&mut rng, m, bound);
                let right = random_gaussian_evaluation(&mut rng, n, bound);
                let sum = left.add(&right).map_err(|e| e.to_string())?;
                let good = certify_frobenius(&sum, m + n, DEFAULT_TOLERANCE)
                    .map_err(|e| format!("(m={m}, n={n}, rep {rep}): {e}"))?;
                if !good.is_frobenius() {
                    return Err(format!(
                        "(m={m}, n={n}, rep {rep}): sum failed at degree {}: {:?}",
                        m + n,
                        good.failure
                    ));
                }
                let short = certify_frobenius(&sum, m + n - 1, DEFAULT_TOLERANCE)
                    .map_err(|e| format!("(m={m}, n={n}, rep {rep}): {e}"))?;
                if short.is_frobenius() {
                    return Err(format!(
                        "(m={m}, n={n}, rep {rep}): sum of {} points certified at degree {}",
                        m + n,
                        m + n - 1
                    ));
                }
                cases += 1;
            }
        }
    }
    Ok((
        cases,
        "sums certify at the summed degree and fail one below".into(),
    ))
}

// Evaluation functional of `count` random points in Q[i]^2.
fn random_gaussian_evaluation(
    rng: &mut ChaCha20Rng,
    count: u64,
    bound: u32,
) -> MomentFunctional<Q> {
    let entries = (0..count)
        .map(|_| (vec![random_gaussian(rng), random_gaussian(rng)], 1))
        .collect();
    let points = PointMultiset::new(2, entries).expect("coordinates have the right width");
    evaluation_functional(&points, bound)
}

// ---------------------------------------------------------------------------
// 6. closed form for unit-padded tuples
// ---------------------------------------------------------------------------

fn criterion_padding(seed: u64) -> Outcome {
    let mut rng = case_rng(seed, 6);
    let total = 100;
    for case in 0..total {
        let n = rng.gen_range(1..=6usize);
        let (closed, direct) = if case % 2 == 0 {
            let num_vars = rng.gen_range(1..=3usize);
            let degree = rng.gen_range(0..=2u32);
            let f = random_moments(&mut rng, num_vars, degree.max(1));
            let a = random_sparse_poly(&mut rng, num_vars, degree);
            let mut args = vec![a.clone()];
            args.resize(n, Polynomial::one(num_vars));
            (
                phi_one_padding(&f, &a, n).map_err(|e| format!("case {case}: {e}"))?,
                phi_permutation(&f, &args).map_err(|e| format!("case {case}: {e}"))?,
            )
        } else {
            let dim = rng.gen_range(1..=4usize);
            let f = random_finite(&mut rng, dim);
            let a: Vec<Q> = (0..dim).map(|_| random_real(&mut rng)).collect();
            let mut args = vec![a.clone()];
            args.resize(n, f.one_elem());
            (
                phi_one_padding(&f, &a, n).map_err(|e| format!("case {case}: {e}"))?,
                phi_permutation(&f, &args).map_err(|e| format!("case {case}: {e}"))?,
            )
        };
        if closed != direct {
            return Err(format!(
                "case {case} (n = {n}): closed form {closed} vs direct {direct}"
            ));
        }
    }
    Ok((total, "falling-factorial closed form matches".into()))
}

// ---------------------------------------------------------------------------
// 7. finite round trip (exhaustive)
// ---------------------------------------------------------------------------

// All ways to write `total` as an ordered sum of `parts` nonnegative terms.
fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for head in 0..=total {
        for mut tail in compositions(total - head, parts - 1) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn criterion_finite_round_trip(_seed: u64) -> Outcome {
    let mut cases = 0;
    let mut certified = 0;
    for set_size in 1..=5usize {
        let labels: Vec<String> = (0..set_size).map(|i| format!("x{i}")).collect();
        for n in 0..=5u64 {
            for counts in compositions(n, set_size) {
                let f = FiniteFunctional::<Q>::from_multiplicities(labels.clone(), &counts)
                    .map_err(|e| e.to_string())?;
                let got = decompose_finite(&f, n).map_err(|e| format!("counts {counts:?}: {e}"))?;
                let want = LabelMultiset::new(
                    labels.iter().cloned().zip(counts.iter().copied()).collect(),
                );
                if got != want {
                    return Err(format!(
                        "counts {counts:?}: recovered {got}, expected {want}"
                    ));
                }
                // certification sweeps a tuple space that grows like
                // C(n + set_size, set_size); run it where that stays small
                if set_size as u64 + n <= 7 {
                    let certificate = certify_frobenius(&f, n, DEFAULT_TOLERANCE)
                        .map_err(|e| format!("counts {counts:?}: {e}"))?;
                    if !certificate.is_frobenius() {
                        return Err(format!(
                            "counts {counts:?}: evaluation data failed certification: {:?}",
                            certificate.failure
                        ));
                    }
                    certified += 1;
                }
                cases += 1;
            }
        }
    }
    Ok((
        cases,
        format!("every multiset round-trips through indicators ({certified} also certified)"),
    ))
}

// ---------------------------------------------------------------------------
// 8. polynomial round trip (randomized)
// ---------------------------------------------------------------------------

fn criterion_polynomial_round_trip(seed: u64) -> Outcome {
    let mut rng = case_rng(seed, 8);
    let total = 100;
    for case in 0..total {
        let num_vars = rng.gen_range(1..=3usize);
        let distinct = rng.gen_range(1..=3usize);
        let mut entries = Vec::new();
        let mut remaining = 5u64;
        for _ in 0..distinct {
            if remaining == 0 {
                break;
            }
            let mult = rng.gen_range(1..=remaining.min(2));
            remaining -= mult;
            let coords: Vec<Q> = (0..num_vars).map(|_| small_coordinate(&mut rng)).collect();
            entries.push((coords, mult));
        }
        let points = PointMultiset::new(num_vars, entries).expect("width is consistent");
        let n = points.total();
        let f = evaluation_functional(&points, n as u32);
        let opts = DecomposeOptions {
            seed: seed.wrapping_add(case),
            ..DecomposeOptions::default()
        };
        let report = decompose_polynomial(&f, n, &opts)
            .map_err(|e| format!("case {case} ({points}): {e}"))?;
        if report.points != points {
            return Err(format!(
                "case {case}: recovered {} instead of {points}",
                report.points
            ));
        }
        if report.residual != 0.0 {
            return Err(format!(
                "case {case}: nonzero exact residual {}",
                report.residual
            ));
        }
        if report.retries > 8 {
            return Err(format!("case {case}: took {} retries", report.retries));
        }
    }
    Ok((
        total as usize,
        "all multisets recovered exactly with zero residual".into(),
    ))
}

// ---------------------------------------------------------------------------
// 9. quotient variety membership
// ---------------------------------------------------------------------------

fn parabola_ideal() -> Polynomial<Q> {
    // u1^2 - u2
    Polynomial::variable(2, 0)
        .mul(&Polynomial::variable(2, 0))
        .sub(&Polynomial::variable(2, 1))
}

fn circle_ideal() -> Polynomial<Q> {
    // u1^2 + u2^2 - 1
    Polynomial::variable(2, 0)
        .mul(&Polynomial::variable(2, 0))
        .add(&Polynomial::variable(2, 1).mul(&Polynomial::variable(2, 1)))
        .sub(&Polynomial::one(2))
}

fn parabola_point(rng: &mut ChaCha20Rng) -> Vec<Q> {
    let x = small_coordinate(rng);
    let y = x.clone() * x.clone();
    vec![x, y]
}

fn circle_point(rng: &mut ChaCha20Rng) -> Vec<Q> {
    // rational parametrization ((1 - t^2) / (1 + t^2), 2t / (1 + t^2))
    let t = small_coordinate(rng);
    let t2 = t.clone() * t.clone();
    let denom = Q::one() + t2.clone();
    vec![
        (Q::one() - t2) / denom.clone(),
        (Q::from_i64(2) * t) / denom,
    ]
}

fn criterion_quotient(seed: u64) -> Outcome {
    let mut rng = case_rng(seed, 9);
    let mut cases = 0;
    // 20 on-variety cases, half per ideal
    for case in 0..20usize {
        let on_parabola = case % 2 == 0;
        let generator = if on_parabola {
            parabola_ideal()
        } else {
            circle_ideal()
        };
        let count = rng.gen_range(1..=3usize);
        let entries: Vec<(Vec<Q>, u64)> = (0..count)
            .map(|_| {
                let p = if on_parabola {
                    parabola_point(&mut rng)
                } else {
                    circle_point(&mut rng)
                };
                (p, 1)
            })
            .collect();
        let points = PointMultiset::new(2, entries).expect("planar points");
        let n = points.total();
        let f = evaluation_functional(&points, (n as u32).max(2));
        let opts = DecomposeOptions {
            seed: seed.wrapping_add(case as u64),
            ..DecomposeOptions::default()
        };
        let report = decompose_quotient(&f, &[generator], n, &opts)
            .map_err(|e| format!("on-variety case {case} ({points}): {e}"))?;
        if report.points != points {
            return Err(format!(
                "on-variety case {case}: recovered {} instead of {points}",
                report.points
            ));
        }
        cases += 1;
    }
    // 5 off-variety cases must fail the annihilation precheck
    for case in 0..5usize {
        let on_parabola = case % 2 == 0;
        let generator = if on_parabola {
            parabola_ideal()
        } else {
            circle_ideal()
        };
        let mut bad = if on_parabola {
            parabola_point(&mut rng)
        } else {
            circle_point(&mut rng)
        };
        bad[1] = bad[1].clone() + Q::from_i64(rng.gen_range(1..=3));
        let points = PointMultiset::new(2, vec![(bad, 1)]).expect("planar point");
        let f = evaluation_functional(&points, 2);
        match decompose_quotient(&f, &[generator], 1, &DecomposeOptions::default()) {
            Err(crate::error::ReconstructError::IdealNotAnnihilated { .. }) => cases += 1,
            Err(other) => {
                return Err(format!("off-variety case {case}: wrong error {other}"));
            }
            Ok(_) => {
                return Err(format!(
                    "off-variety case {case}: decomposition succeeded on {points}"
                ));
            }
        }
    }
    Ok((
        cases,
        "variety membership holds; off-variety inputs are rejected".into(),
    ))
}

// ---------------------------------------------------------------------------
// 10. idempotent integrality
// ---------------------------------------------------------------------------

fn criterion_idempotents(_seed: u64) -> Outcome {
    let mut cases = 0;
    for set_size in 1..=5usize {
        let labels: Vec<String> = (0..set_size).map(|i| format!("x{i}")).collect();
        for n in 0..=5u64 {
            for counts in compositions(n, set_size) {
                let f = FiniteFunctional::<Q>::from_multiplicities(labels.clone(), &counts)
                    .map_err(|e| e.to_string())?;
                for r in 0..set_size {
                    let value = f.apply(&f.indicator(r)).map_err(|e| e.to_string())?;
                    let Some(int) = value.to_integer(0.0) else {
                        return Err(format!(
                            "counts {counts:?}: f(e_{r}) = {value} is not an integer"
                        ));
                    };
                    if int.is_negative() || int > n.into() {
                        return Err(format!(
                            "counts {counts:?}: f(e_{r}) = {int} outside [0, {n}]"
                        ));
                    }
                }
                cases += 1;
            }
        }
    }
    Ok((cases, "idempotent values are integers within [0, n]".into()))
}

// ---------------------------------------------------------------------------
// 11. all-unit tuples evaluate to n!
// ---------------------------------------------------------------------------

fn criterion_unit_factorial(_seed: u64) -> Outcome {
    let mut cases = 0;
    for n in 1..=8usize {
        let want = factorial_scalar(n);

        // finite algebra: n points each weighted once
        let f = FiniteFunctional::<Q>::from_multiplicities(
            (0..n).map(|i| format!("x{i}")).collect(),
            &vec![1u64; n],
        )
        .map_err(|e| e.to_string())?;
        let args = vec![f.one_elem(); n];
        let got = phi_auto(&f, &args).map_err(|e| format!("finite n = {n}: {e}"))?;
        if got != want {
            return Err(format!("finite n = {n}: got {got}, expected {n}!"));
        }
        cases += 1;

        // polynomial algebra: n distinct integer points on the line
        let points = PointMultiset::new(
            1,
            (0..n).map(|j| (vec![Q::from_i64(j as i64)], 1)).collect(),
        )
        .map_err(|e| e.to_string())?;
        let g = evaluation_functional(&points, n as u32);
        let args = vec![g.one_elem(); n];
        let got = phi_auto(&g, &args).map_err(|e| format!("moments n = {n}: {e}"))?;
        if got != want {
            return Err(format!("moments n = {n}: got {got}, expected {n}!"));
        }
        cases += 1;
    }
    Ok((cases, "all-unit tuples evaluate to n factorial".into()))
}
