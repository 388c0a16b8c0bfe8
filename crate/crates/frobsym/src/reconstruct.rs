//! Decomposition of Frobenius functionals into evaluation points.
//!
//! A degree-`n` Frobenius functional is a sum of `n` point evaluations
//! (with multiplicity). This module recovers those points:
//!
//! * [`decompose_finite`] — on a finite set, the multiplicity at a point
//!   is just the value of the functional on that point's indicator
//!   idempotent.
//! * [`decompose_polynomial`] — on a polynomial algebra, a random
//!   *separating form* ψ collapses the problem to one variable: the power
//!   sums `f(ψᵏ)` turn into elementary symmetric functions (Newton), the
//!   monic polynomial they define has the values `ψ(xⱼ)` as roots, and
//!   Lagrange interpolation recovers each point's multiplicity and
//!   coordinates. The result is verified against the input moments and the
//!   form is redrawn on failure (a collision of ψ-values of distinct
//!   points is only detectable at that final verification).
//! * [`decompose_quotient`] — as above, plus a check that the functional
//!   annihilates a given ideal and that every recovered point lies on the
//!   ideal's variety.
//!
//! Everything is deterministic: separating forms come from a seeded RNG,
//! and retries consume successive draws with a growing coefficient range.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{AlgebraError, ReconstructError, RootError};
use crate::frobenius::vanishes;
use crate::functional::{
    evaluation_functional, FiniteFunctional, Functional, LabelMultiset, MomentFunctional,
    PointMultiset,
};
use crate::polynomial::{all_monomials_up_to_degree, Polynomial};
use crate::roots::{roots_with_multiplicity, RootScalar};
use crate::scalar::{BigComplex, GaussianRational, Scalar};
use crate::univariate::UniPoly;

/// Float-mode tolerance for rounding a recovered multiplicity to an
/// integer. Deviations beyond this mean the input was not a Frobenius
/// functional, not that the arithmetic was noisy.
pub const MULTIPLICITY_TOLERANCE: f64 = 1e-6;

/// Default number of fresh separating forms tried after the first fails.
pub const DEFAULT_MAX_RETRIES: u32 = 8;

// ---------------------------------------------------------------------------
// Finite algebras
// ---------------------------------------------------------------------------

/// Decomposes a functional on a finite set: the multiplicity at point `r`
/// is the value on the indicator of `r`. Values must be nonnegative
/// integers summing to `n`.
pub fn decompose_finite<S: Scalar>(
    f: &FiniteFunctional<S>,
    n: u64,
) -> Result<LabelMultiset, ReconstructError> {
    let int_tol = if S::EXACT {
        0.0
    } else {
        MULTIPLICITY_TOLERANCE
    };
    let mut entries = Vec::new();
    let mut total = BigInt::zero();
    for (r, label) in f.labels().iter().enumerate() {
        let value = f
            .apply(&f.indicator(r))
            .map_err(ReconstructError::Algebra)?;
        let Some(m) = value.to_integer(int_tol) else {
            return Err(ReconstructError::NotFrobenius(format!(
                "multiplicity at {label} is {value}, not an integer"
            )));
        };
        if m.is_negative() {
            return Err(ReconstructError::NotFrobenius(format!(
                "multiplicity at {label} is {m}, negative"
            )));
        }
        total += &m;
        if let Some(count) = m.to_u64() {
            if count > 0 {
                entries.push((label.clone(), count));
            }
        }
    }
    if total != BigInt::from(n) {
        return Err(ReconstructError::Inconsistent(format!(
            "multiplicities sum to {total}, expected {n}"
        )));
    }
    Ok(LabelMultiset::new(entries))
}

// ---------------------------------------------------------------------------
// Newton identities
// ---------------------------------------------------------------------------

/// Elementary symmetric functions `e_1..e_n` from power sums `p_1..p_n`
/// via `k·e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i`.
pub fn power_sums_to_elementary<S: Scalar>(p: &[S]) -> Vec<S> {
    let n = p.len();
    let mut e: Vec<S> = Vec::with_capacity(n + 1);
    e.push(S::one());
    for k in 1..=n {
        let mut acc = S::zero();
        for i in 1..=k {
            let term = e[k - i].clone() * p[i - 1].clone();
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        e.push(acc / S::from_i64(k as i64));
    }
    e.remove(0);
    e
}

// ---------------------------------------------------------------------------
// Separating forms
// ---------------------------------------------------------------------------

/// A linear form `psi = sum c_i u_i` used to collapse a multivariate
/// decomposition to a univariate one. The recovered `psi`-values of
/// distinct points must end up pairwise distinct; forms are redrawn until
/// they do.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparatingForm<S: Scalar> {
    /// One coefficient per variable; never all zero.
    pub coefficients: Vec<S>,
    /// The RNG seed the form was drawn from.
    pub seed: u64,
}

impl<S: Scalar> SeparatingForm<S> {
    /// The form as a degree-one polynomial.
    pub fn as_polynomial(&self) -> Polynomial<S> {
        let m = self.coefficients.len();
        let mut acc = Polynomial::zero(m);
        for (i, c) in self.coefficients.iter().enumerate() {
            acc = acc.add(&Polynomial::variable(m, i).scale(c));
        }
        acc
    }
}

/// Draws the next separating form, deterministically from the seed and the
/// retry count `previous.len()`. Coefficients are integers in
/// `[-(t+1), t+1]` on the `t`-th retry — the range grows so a redraw
/// almost surely escapes any fixed collision hyperplane — and the draw is
/// rerolled while it is all zero or repeats an already-failed form.
pub fn select_separating_form<S: Scalar>(
    previous: &[SeparatingForm<S>],
    seed: u64,
    num_vars: usize,
) -> SeparatingForm<S> {
    let t = previous.len() as u64;
    let mut rng =
        ChaCha20Rng::seed_from_u64(seed.wrapping_add(t.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
    let bound = t as i64 + 1;
    loop {
        let raw: Vec<i64> = (0..num_vars)
            .map(|_| rng.gen_range(-bound..=bound))
            .collect();
        if raw.iter().all(|c| *c == 0) {
            continue;
        }
        let coefficients: Vec<S> = raw.into_iter().map(S::from_i64).collect();
        if previous.iter().any(|p| p.coefficients == coefficients) {
            continue;
        }
        return SeparatingForm { coefficients, seed };
    }
}

// ---------------------------------------------------------------------------
// Polynomial algebras
// ---------------------------------------------------------------------------

/// Knobs for the decomposition pipeline.
#[derive(Clone, Debug)]
pub struct DecomposeOptions {
    /// Seed for the separating-form draws.
    pub seed: u64,
    /// Float-mode acceptance tolerance for the final verification,
    /// relative to the input's magnitude. A root of multiplicity `m` at
    /// precision `p` is only locatable to about `2^(-p/m)`, so inputs with
    /// multiple points need a tolerance well above that, not machine-level.
    pub tolerance: f64,
    /// Fresh forms tried after the first fails.
    pub max_retries: u32,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            tolerance: crate::frobenius::DEFAULT_TOLERANCE,
            max_retries: DEFAULT_MAX_RETRIES,
        }
    }
}

/// The outcome of a successful decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct ReconstructionReport<S: Scalar> {
    /// The recovered evaluation points with multiplicities.
    pub points: PointMultiset<S>,
    /// Max absolute difference between rebuilt and input moments; exactly
    /// `0.0` in exact arithmetic.
    pub residual: f64,
    /// The separating form of the successful attempt.
    pub form_used: SeparatingForm<S>,
    /// How many earlier forms failed.
    pub retries: u32,
}

// Why one attempt failed: `Retry` redraws the form, `Fatal` aborts.
enum AttemptFailure {
    Retry { residual: f64 },
    Fatal(ReconstructError),
}

impl From<AlgebraError> for AttemptFailure {
    fn from(e: AlgebraError) -> Self {
        AttemptFailure::Fatal(ReconstructError::Algebra(e))
    }
}

/// Decomposes a moment functional on a polynomial algebra into `n`
/// evaluation points. Requires the functional's degree bound to be at
/// least `n` (powers of the separating form go up to degree `n`).
///
/// Pipeline per attempt: draw ψ; power sums `f(ψᵏ)`; Newton to elementary
/// symmetric functions; roots of the monic polynomial they define (the
/// distinct ψ-values, with multiplicities); Lagrange duals ℓⱼ recover each
/// multiplicity as `f(ℓⱼ(ψ))` and each coordinate as `f(uᵢ·ℓⱼ(ψ))`
/// divided by it; finally the moments of the recovered points are checked
/// against the input. Verification failure — the signature of a ψ-value
/// collision between distinct points — redraws the form, at most
/// `max_retries` times.
pub fn decompose_polynomial<S: RootScalar>(
    f: &MomentFunctional<S>,
    n: u64,
    opts: &DecomposeOptions,
) -> Result<ReconstructionReport<S>, ReconstructError> {
    let bound = f.degree_bound();
    if u64::from(bound) < n {
        return Err(ReconstructError::Algebra(AlgebraError::DegreeOverflow {
            degree: n as u32,
            bound,
        }));
    }
    let mut failed: Vec<SeparatingForm<S>> = Vec::new();
    let mut best_residual = f64::INFINITY;
    for attempt in 0..=opts.max_retries {
        let form = select_separating_form(&failed, opts.seed, f.num_vars());
        match attempt_decomposition(f, n, &form, opts) {
            Ok((points, residual)) => {
                return Ok(ReconstructionReport {
                    points,
                    residual,
                    form_used: form,
                    retries: attempt,
                });
            }
            Err(AttemptFailure::Retry { residual }) => {
                best_residual = best_residual.min(residual);
                failed.push(form);
            }
            Err(AttemptFailure::Fatal(e)) => return Err(e),
        }
    }
    Err(ReconstructError::Failed {
        retries: opts.max_retries,
        best_residual,
    })
}

fn attempt_decomposition<S: RootScalar>(
    f: &MomentFunctional<S>,
    n: u64,
    form: &SeparatingForm<S>,
    opts: &DecomposeOptions,
) -> Result<(PointMultiset<S>, f64), AttemptFailure> {
    let m = f.num_vars();
    let psi = form.as_polynomial();

    // power sums p_k = f(psi^k), k = 1..n
    let mut power_sums = Vec::with_capacity(n as usize);
    let mut psi_power = Polynomial::one(m);
    for _ in 0..n {
        psi_power = psi_power.mul(&psi);
        power_sums.push(f.apply(&psi_power)?);
    }

    // the monic polynomial whose roots are the psi-values of the points
    let elementary = power_sums_to_elementary(&power_sums);
    let node_poly = UniPoly::monic_from_elementary(&elementary);
    let roots = match roots_with_multiplicity(&node_poly, opts.tolerance) {
        Ok(r) => r,
        // cluster trouble is a property of this particular form's values;
        // a fresh form redraws the configuration
        Err(RootError::AmbiguousClusters { .. }) | Err(RootError::NoConvergence { .. }) => {
            return Err(AttemptFailure::Retry {
                residual: f64::INFINITY,
            });
        }
        Err(e) => return Err(AttemptFailure::Fatal(ReconstructError::Numerical(e))),
    };

    // Lagrange duals over the distinct psi-values
    let nodes: Vec<S> = roots.iter().map(|(v, _)| v.clone()).collect();
    let basis = UniPoly::lagrange_basis(&nodes);
    let int_tol = if S::EXACT {
        0.0
    } else {
        MULTIPLICITY_TOLERANCE
    };
    let mut entries: Vec<(Vec<S>, u64)> = Vec::with_capacity(roots.len());
    for (j, (_, root_mult)) in roots.iter().enumerate() {
        let dual = substitute(&basis[j], &psi);
        let mult_value = f.apply(&dual)?;
        let Some(mult) = mult_value.to_integer(int_tol) else {
            return Err(AttemptFailure::Fatal(ReconstructError::NotFrobenius(
                format!("recovered multiplicity {mult_value} is not an integer"),
            )));
        };
        if !mult.is_positive() {
            return Err(AttemptFailure::Fatal(ReconstructError::NotFrobenius(
                format!("recovered multiplicity {mult} is not positive"),
            )));
        }
        if mult != BigInt::from(*root_mult) {
            // root multiplicity and functional weight disagree: a cluster
            // was mis-merged, so redraw
            return Err(AttemptFailure::Retry {
                residual: f64::INFINITY,
            });
        }
        let weight = S::from_bigint(&mult);
        let mut point = Vec::with_capacity(m);
        for i in 0..m {
            let numerator = f.apply(&dual.mul(&Polynomial::variable(m, i)))?;
            point.push(numerator / weight.clone());
        }
        entries.push((point, mult.to_u64().expect("positive and at most n")));
    }
    let points = PointMultiset::new(m, entries)?;

    // verification: the recovered points must reproduce every input moment
    let rebuilt = evaluation_functional(&points, f.degree_bound());
    let mut residual = 0.0f64;
    let mut exact_mismatch = false;
    for (monomial, want) in f.moments() {
        let got = rebuilt.moment(monomial).cloned().unwrap_or_else(S::zero);
        let diff = want.clone() - got;
        if !diff.is_zero() {
            exact_mismatch = true;
            residual = residual.max(diff.magnitude());
        }
    }
    let accepted = if S::EXACT {
        !exact_mismatch
    } else {
        residual <= opts.tolerance * (1.0 + f.magnitude_hint())
    };
    if !accepted {
        return Err(AttemptFailure::Retry { residual });
    }
    Ok((points, residual))
}

// p(x) for a univariate p and a multivariate x, by Horner.
fn substitute<S: Scalar>(p: &UniPoly<S>, x: &Polynomial<S>) -> Polynomial<S> {
    let m = x.num_vars();
    let mut acc = Polynomial::zero(m);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x).add(&Polynomial::constant(m, c.clone()));
    }
    acc
}

// ---------------------------------------------------------------------------
// Quotient algebras
// ---------------------------------------------------------------------------

/// Decomposes a functional presented on a quotient of the polynomial
/// algebra by the ideal the `generators` generate. The functional must
/// annihilate every product of a generator with a monomial that stays
/// within the degree bound (otherwise it is not well defined on the
/// quotient), and every recovered point must lie on the generators' common
/// zero set.
pub fn decompose_quotient<S: RootScalar>(
    f: &MomentFunctional<S>,
    generators: &[Polynomial<S>],
    n: u64,
    opts: &DecomposeOptions,
) -> Result<ReconstructionReport<S>, ReconstructError> {
    let m = f.num_vars();
    let bound = f.degree_bound();
    let scale = f.magnitude_hint();
    for theta in generators {
        if theta.num_vars() != m {
            return Err(ReconstructError::Algebra(AlgebraError::DimensionMismatch {
                expected: m,
                got: theta.num_vars(),
            }));
        }
        let Some(deg) = theta.degree() else {
            continue; // the zero generator is annihilated trivially
        };
        if deg > bound {
            continue; // no product stays within the bound; nothing checkable
        }
        for monomial in all_monomials_up_to_degree(m, bound - deg) {
            let product = theta.mul(&Polynomial::from_terms(m, [(monomial.clone(), S::one())]));
            let value = f.apply(&product).map_err(ReconstructError::Algebra)?;
            if !vanishes(&value, opts.tolerance, scale) {
                return Err(ReconstructError::IdealNotAnnihilated {
                    generator: theta.to_string(),
                    monomial: monomial.to_string(),
                    value: value.to_string(),
                });
            }
        }
    }

    let report = decompose_polynomial(f, n, opts)?;

    for (point, _) in report.points.entries() {
        for theta in generators {
            let value = theta.eval(point).map_err(ReconstructError::Algebra)?;
            if !vanishes(&value, opts.tolerance, scale) {
                return Err(ReconstructError::OffVariety {
                    point: format_point(point),
                    generator: theta.to_string(),
                    value: value.to_string(),
                });
            }
        }
    }
    Ok(report)
}

fn format_point<S: Scalar>(coords: &[S]) -> String {
    let inner: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
    format!("({})", inner.join(", "))
}

// ---------------------------------------------------------------------------
// Exact-first driver
// ---------------------------------------------------------------------------

/// A report from [`decompose_adaptive`]: exact if rational arithmetic
/// sufficed, float if irrational points forced a numerical pass.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "mode", content = "report", rename_all = "kebab-case")]
pub enum AdaptiveReport {
    Exact(ReconstructionReport<GaussianRational>),
    Float(ReconstructionReport<BigComplex>),
}

/// Runs the exact decomposition and, if the evaluation points turn out to
/// be irrational (the one failure exact root extraction reports), reruns
/// the whole pipeline in float arithmetic at `precision` bits.
pub fn decompose_adaptive(
    f: &MomentFunctional<GaussianRational>,
    generators: &[Polynomial<GaussianRational>],
    n: u64,
    opts: &DecomposeOptions,
    precision: u32,
) -> Result<AdaptiveReport, ReconstructError> {
    match decompose_quotient(f, generators, n, opts) {
        Ok(report) => Ok(AdaptiveReport::Exact(report)),
        Err(ReconstructError::Numerical(RootError::Irrational { .. })) => {
            let lifted = lift_moments(f, precision).map_err(ReconstructError::Algebra)?;
            let lifted_gens: Vec<Polynomial<BigComplex>> = generators
                .iter()
                .map(|g| lift_polynomial(g, precision))
                .collect();
            decompose_quotient(&lifted, &lifted_gens, n, opts).map(AdaptiveReport::Float)
        }
        Err(e) => Err(e),
    }
}

/// The same moment functional with every value converted to a float of the
/// given precision.
pub fn lift_moments(
    f: &MomentFunctional<GaussianRational>,
    precision: u32,
) -> Result<MomentFunctional<BigComplex>, AlgebraError> {
    let moments: BTreeMap<_, _> = f
        .moments()
        .map(|(k, v)| (k.clone(), BigComplex::from_exact(v, precision)))
        .collect();
    MomentFunctional::new(f.num_vars(), f.degree_bound(), moments)
}

/// The same polynomial with float coefficients of the given precision.
pub fn lift_polynomial(p: &Polynomial<GaussianRational>, precision: u32) -> Polynomial<BigComplex> {
    Polynomial::from_terms(
        p.num_vars(),
        p.terms()
            .map(|(m, c)| (m.clone(), BigComplex::from_exact(c, precision))),
    )
}
