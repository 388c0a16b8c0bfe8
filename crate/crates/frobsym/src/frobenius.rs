//! Frobenius transformations and certification.
//!
//! The transformation `Phi_k(f)` of a linear functional `f` is computed by
//! three independent routes that must agree everywhere:
//!
//! * [`phi_permutation`] — the defining sum over all `k!` permutations,
//!   with `f` applied to the cycle products;
//! * [`phi_partition`] — the collapsed sum `sum eps(pi) n(pi) f_pi` over set
//!   partitions, reusing [`crate::partitions::chi`];
//! * [`phi_inductive`] — the recursion
//!   `Phi_{k+1}(a1, rest) = f(a1) Phi_k(rest) - sum_i Phi_k(rest with a1*ai)`,
//!   memoized on canonical argument multisets.
//!
//! On the diagonal the calculus collapses to symmetric-function identities:
//! [`phi_diagonal_series`] runs the power-sum recursion and
//! [`egf_coefficients`] independently exponentiates the generating series
//! `exp(sum (-1)^(k+1) f(a^k) t^k / k)`.
//!
//! [`certify_frobenius`] checks the two defining conditions of a Frobenius
//! n-homomorphism — `f(1) = n` and the vanishing of `Phi_{n+1}(f)` — over
//! the functional's certification atoms, and returns an explicit
//! certificate, with a concrete witness tuple on failure.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{AlgebraError, FrobeniusError};
use crate::functional::Functional;
use crate::partitions::{enumerate_set_partitions_with_limit, partition_sign, partition_weight};
use crate::scalar::Scalar;

/// Cap on the argument count of the factorial-cost permutation sum.
pub const DEFAULT_PERMUTATION_ARITY_LIMIT: usize = 9;

/// Cap on the argument count of the subset-product table (`2^k` entries),
/// shared by the partition and inductive routes.
pub const SUBSET_TABLE_ARITY_LIMIT: usize = 16;

/// Largest ground size the partition route enumerates (Bell-number growth).
pub const PARTITION_ARITY_LIMIT: usize = 10;

/// Default tolerance for float-mode vanishing tests; scaled by the size of
/// the functional's data before use.
pub const DEFAULT_TOLERANCE: f64 = 1e-20;

/// True when `v` counts as zero: exact zero in exact mode, or magnitude at
/// most `tol * (1 + scale)` in float mode (`scale` is the size of the data
/// that produced `v`, so the test is scale-aware).
pub(crate) fn vanishes<S: Scalar>(v: &S, tol: f64, scale: f64) -> bool {
    if S::EXACT {
        v.is_zero()
    } else {
        v.magnitude() <= tol * (1.0 + scale)
    }
}

fn factorial(n: usize) -> BigInt {
    let mut f = BigInt::from(1);
    for j in 2..=n {
        f *= BigInt::from(j);
    }
    f
}

// ---------------------------------------------------------------------------
// Subset products
// ---------------------------------------------------------------------------

/// `f` applied to every subset product of the arguments, indexed by bitmask:
/// `value(m)` is `f(prod of args[i] for bits i of m)`, with `value(0) = f(1)`.
/// Commutativity makes every cycle and block product depend only on its
/// index set, so one table serves all three Phi routes.
pub struct SubsetProducts<S> {
    values: Vec<S>,
}

impl<S: Scalar> SubsetProducts<S> {
    pub fn build<F: Functional<S>>(f: &F, args: &[F::Elem]) -> Result<Self, FrobeniusError> {
        let k = args.len();
        if k == 0 {
            return Err(AlgebraError::Invalid("at least one argument required".into()).into());
        }
        if k > SUBSET_TABLE_ARITY_LIMIT {
            return Err(FrobeniusError::ArityLimit {
                arity: k,
                limit: SUBSET_TABLE_ARITY_LIMIT,
            });
        }
        let mut elems: Vec<F::Elem> = Vec::with_capacity(1 << k);
        elems.push(f.one_elem());
        for mask in 1usize..1 << k {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1); // mask without its lowest bit
            let e = if rest == 0 {
                args[low].clone()
            } else {
                f.mul_elems(&elems[rest], &args[low])?
            };
            elems.push(e);
        }
        let mut values = Vec::with_capacity(1 << k);
        for e in &elems {
            values.push(f.apply(e)?);
        }
        Ok(SubsetProducts { values })
    }

    pub fn value(&self, mask: usize) -> &S {
        &self.values[mask]
    }
}

// ---------------------------------------------------------------------------
// The three Phi routes
// ---------------------------------------------------------------------------

/// `Phi_k(f)(args)` as the defining sum over all `k!` permutations: each
/// permutation contributes its sign times the product of `f` over its cycle
/// products.
pub fn phi_permutation<S: Scalar, F: Functional<S>>(
    f: &F,
    args: &[F::Elem],
) -> Result<S, FrobeniusError> {
    phi_permutation_with_limit(f, args, DEFAULT_PERMUTATION_ARITY_LIMIT)
}

/// As [`phi_permutation`] with a caller-chosen arity cap.
pub fn phi_permutation_with_limit<S: Scalar, F: Functional<S>>(
    f: &F,
    args: &[F::Elem],
    limit: usize,
) -> Result<S, FrobeniusError> {
    let k = args.len();
    if k > limit {
        return Err(FrobeniusError::ArityLimit { arity: k, limit });
    }
    let table = SubsetProducts::build(f, args)?;
    let mut acc = S::zero();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut seen = vec![false; k];
    // iterative Heap's algorithm
    let mut c = vec![0usize; k];
    loop {
        acc = acc + permutation_term(&table, &perm, &mut seen);
        // advance to the next permutation
        let mut i = 1;
        loop {
            if i >= k {
                return Ok(acc);
            }
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                c[i] += 1;
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

// sign(sigma) * prod over cycles of f(cycle product)
fn permutation_term<S: Scalar>(table: &SubsetProducts<S>, perm: &[usize], seen: &mut [bool]) -> S {
    let k = perm.len();
    seen.fill(false);
    let mut term = S::one();
    let mut cycles = 0;
    for start in 0..k {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut mask = 0usize;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            mask |= 1 << i;
            i = perm[i];
        }
        term = term * table.value(mask).clone();
    }
    if (k - cycles) % 2 == 1 {
        term = -term;
    }
    term
}

/// `Phi_k(f)(args)` as the partition sum `sum eps(pi) n(pi) f_pi`, where
/// `f_pi` is the product of `f` over the block products. Must agree with
/// [`phi_permutation`] on every input.
pub fn phi_partition<S: Scalar, F: Functional<S>>(
    f: &F,
    args: &[F::Elem],
) -> Result<S, FrobeniusError> {
    let k = args.len();
    if k > PARTITION_ARITY_LIMIT {
        return Err(FrobeniusError::ArityLimit {
            arity: k,
            limit: PARTITION_ARITY_LIMIT,
        });
    }
    let table = SubsetProducts::build(f, args)?;
    let partitions = enumerate_set_partitions_with_limit(k, PARTITION_ARITY_LIMIT)
        .map_err(|e| AlgebraError::Invalid(e.to_string()))?;
    let mut acc = S::zero();
    for pi in partitions {
        let mut term = S::from_bigint(&(BigInt::from(partition_sign(&pi)) * partition_weight(&pi)));
        for block in pi.blocks() {
            let mask = block.iter().fold(0usize, |m, &i| m | (1 << i));
            term = term * table.value(mask).clone();
        }
        acc = acc + term;
    }
    Ok(acc)
}

/// `Phi_k(f)(args)` by the recursion
/// `Phi_{k}(a1, rest) = f(a1) Phi_{k-1}(rest) - sum_i Phi_{k-1}(rest with a1*a_i)`,
/// memoized on the canonical multiset of argument index sets. Must agree
/// with [`phi_permutation`] on every input; this is the route that scales
/// past the factorial cap (state count is the Bell number of `k`).
pub fn phi_inductive<S: Scalar, F: Functional<S>>(
    f: &F,
    args: &[F::Elem],
) -> Result<S, FrobeniusError> {
    let table = SubsetProducts::build(f, args)?;
    let state: Vec<u32> = (0..args.len()).map(|i| 1u32 << i).collect();
    let mut memo: HashMap<Vec<u32>, S> = HashMap::new();
    Ok(phi_inductive_rec(&table, state, &mut memo))
}

fn phi_inductive_rec<S: Scalar>(
    table: &SubsetProducts<S>,
    state: Vec<u32>, // sorted, pairwise-disjoint masks over the original args
    memo: &mut HashMap<Vec<u32>, S>,
) -> S {
    if state.len() == 1 {
        return table.value(state[0] as usize).clone();
    }
    if let Some(v) = memo.get(&state) {
        return v.clone();
    }
    let a1 = state[0];
    let rest = &state[1..];
    let mut acc = table.value(a1 as usize).clone() * phi_inductive_rec(table, rest.to_vec(), memo);
    for i in 0..rest.len() {
        let mut merged: Vec<u32> = rest.to_vec();
        merged[i] |= a1;
        merged.sort_unstable();
        acc = acc - phi_inductive_rec(table, merged, memo);
    }
    memo.insert(state, acc.clone());
    acc
}

/// Route chooser: the partition sum while the ground set is enumerable,
/// the memoized recursion beyond.
pub(crate) fn phi_auto<S: Scalar, F: Functional<S>>(
    f: &F,
    args: &[F::Elem],
) -> Result<S, FrobeniusError> {
    if args.len() <= PARTITION_ARITY_LIMIT {
        phi_partition(f, args)
    } else {
        phi_inductive(f, args)
    }
}

// ---------------------------------------------------------------------------
// Diagonal calculus
// ---------------------------------------------------------------------------

/// `[Phi_0, Phi_1(f)(a), .., Phi_N(f)(a,..,a)]` (with `Phi_0 = 1`) via the
/// power-sum recursion for the scaled values `c_n = Phi_n / n!`:
/// `c_n = (1/n) sum_{k=1..n} (-1)^(k+1) f(a^k) c_{n-k}`.
pub fn phi_diagonal_series<S: Scalar, F: Functional<S>>(
    f: &F,
    a: &F::Elem,
    n_max: usize,
) -> Result<Vec<S>, FrobeniusError> {
    let p = power_values(f, a, n_max)?;
    let mut c = vec![S::one()];
    for n in 1..=n_max {
        let mut acc = S::zero();
        for k in 1..=n {
            let term = p[k].clone() * c[n - k].clone();
            acc = if k % 2 == 1 { acc + term } else { acc - term };
        }
        c.push(acc / S::from_i64(n as i64));
    }
    Ok(scale_by_factorials(c))
}

/// The same list as [`phi_diagonal_series`], computed independently by
/// exponentiating the generating series: the coefficients of
/// `exp(sum_{k>=1} (-1)^(k+1) f(a^k) t^k / k)` times `n!`. The two must
/// agree entry by entry.
pub fn egf_coefficients<S: Scalar, F: Functional<S>>(
    f: &F,
    a: &F::Elem,
    n_max: usize,
) -> Result<Vec<S>, FrobeniusError> {
    let p = power_values(f, a, n_max)?;
    // log series L(t) = sum (-1)^(k+1) p_k t^k / k, truncated past t^N
    let mut log = vec![S::zero(); n_max + 1];
    for k in 1..=n_max {
        let c = p[k].clone() / S::from_i64(k as i64);
        log[k] = if k % 2 == 1 { c } else { -c };
    }
    // exp by the Taylor sum: E = sum_j L^j / j!; L has no constant term, so
    // powers past j = N cannot reach the truncation window
    let mut exp = vec![S::zero(); n_max + 1];
    exp[0] = S::one();
    let mut power = exp.clone(); // L^0
    for j in 1..=n_max {
        power = series_mul(&power, &log, n_max);
        let inv_fact = S::from_bigint(&factorial(j))
            .invert()
            .expect("j! is nonzero");
        for (e, pw) in exp.iter_mut().zip(&power) {
            *e = e.clone() + pw.clone() * inv_fact.clone();
        }
    }
    Ok(scale_by_factorials(exp))
}

fn power_values<S: Scalar, F: Functional<S>>(
    f: &F,
    a: &F::Elem,
    n_max: usize,
) -> Result<Vec<S>, FrobeniusError> {
    let mut p = vec![S::zero()]; // p[0] unused
    let mut pw = None::<F::Elem>;
    for _ in 1..=n_max {
        let next = match &pw {
            None => a.clone(),
            Some(prev) => f.mul_elems(prev, a)?,
        };
        p.push(f.apply(&next)?);
        pw = Some(next);
    }
    Ok(p)
}

fn series_mul<S: Scalar>(a: &[S], b: &[S], n_max: usize) -> Vec<S> {
    let mut out = vec![S::zero(); n_max + 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j > n_max {
                break;
            }
            out[i + j] = out[i + j].clone() + ai.clone() * bj.clone();
        }
    }
    out
}

fn scale_by_factorials<S: Scalar>(c: Vec<S>) -> Vec<S> {
    c.into_iter()
        .enumerate()
        .map(|(n, cn)| cn * S::from_bigint(&factorial(n)))
        .collect()
}

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

/// How a certificate's tuple enumeration was scoped.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificationMethod {
    /// Every multiset of basis elements was checked; the certificate is
    /// complete (finite algebras).
    ExhaustiveBasis,
    /// Multisets of monomials up to the stated total degree were checked;
    /// the certificate holds up to that degree (moment tables).
    MonomialsToDegree(u32),
}

/// Why certification failed.
#[derive(Clone, PartialEq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateFailure<S: Scalar> {
    /// `f(1)` is not the asserted degree.
    UnitValue { expected: u64, actual: S },
    /// A concrete tuple with `Phi_{n+1}(f)(tuple) != 0`.
    Tuple { elements: Vec<String>, value: S },
}

/// The outcome of checking the two defining conditions of a Frobenius
/// n-homomorphism over an explicit, recorded scope.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct FrobeniusCertificate<S: Scalar> {
    /// The degree `n` that was tested.
    pub degree: u64,
    /// The observed `f(1)`.
    pub f1_value: S,
    /// What the tuple enumeration covered.
    pub method: CertificationMethod,
    /// `None` on success; the first failure found otherwise.
    pub failure: Option<CertificateFailure<S>>,
}

impl<S: Scalar> FrobeniusCertificate<S> {
    pub fn is_frobenius(&self) -> bool {
        self.failure.is_none()
    }
}

/// Certifies that `f` is a Frobenius n-homomorphism: `f(1) = n` and
/// `Phi_{n+1}(f)` vanishes on every tuple in scope.
///
/// Tuples are multisets of the functional's certification atoms (unit
/// excluded). Tuples containing the unit need no enumeration: the exact
/// identity `Phi_{n+1}(f)(1, rest) = (f(1) - n) * Phi_n(f)(rest)` makes
/// every one of them vanish once `f(1) = n` holds, so the unit check covers
/// them all. Float mode compares against `tol * (1 + sum |values|)`.
pub fn certify_frobenius<S: Scalar, F: Functional<S>>(
    f: &F,
    n: u64,
    tol: f64,
) -> Result<FrobeniusCertificate<S>, FrobeniusError> {
    let scope = f.certification_scope();
    let method = match scope {
        Some(d) => CertificationMethod::MonomialsToDegree(d),
        None => CertificationMethod::ExhaustiveBasis,
    };
    let tuple_len = (n + 1) as usize;
    if let Some(d) = scope {
        // even the all-linear tuple has total degree n+1
        if tuple_len as u64 > d as u64 {
            return Err(FrobeniusError::ScopeTooSmall {
                degree: tuple_len,
                bound: d,
            });
        }
    }
    let f1 = f.unit_value();
    let hint = f.magnitude_hint();
    let f1_ok = vanishes(&(f1.clone() - S::from_i64(n as i64)), tol, hint);
    if !f1_ok {
        return Ok(FrobeniusCertificate {
            degree: n,
            f1_value: f1.clone(),
            method,
            failure: Some(CertificateFailure::UnitValue {
                expected: n,
                actual: f1,
            }),
        });
    }
    let atoms = f.certification_atoms();
    let mut chosen: Vec<usize> = Vec::with_capacity(tuple_len);
    let failure = search_tuples(
        f,
        &atoms,
        scope.map(|d| d as i64),
        tuple_len,
        0,
        &mut chosen,
        tol,
        hint,
    )?;
    Ok(FrobeniusCertificate {
        degree: n,
        f1_value: f1,
        method,
        failure,
    })
}

// Depth-first enumeration of atom multisets (non-decreasing indices) with a
// total-degree budget; returns the first failing tuple.
#[allow(clippy::too_many_arguments)]
fn search_tuples<S: Scalar, F: Functional<S>>(
    f: &F,
    atoms: &[(F::Elem, u32)],
    budget: Option<i64>,
    slots: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    tol: f64,
    hint: f64,
) -> Result<Option<CertificateFailure<S>>, FrobeniusError> {
    if slots == 0 {
        let args: Vec<F::Elem> = chosen.iter().map(|&i| atoms[i].0.clone()).collect();
        let value = phi_auto(f, &args)?;
        if vanishes(&value, tol, hint) {
            return Ok(None);
        }
        return Ok(Some(CertificateFailure::Tuple {
            elements: chosen
                .iter()
                .map(|&i| f.describe_elem(&atoms[i].0))
                .collect(),
            value,
        }));
    }
    for i in start..atoms.len() {
        let d = atoms[i].1 as i64;
        // the remaining slots each cost at least the cheapest later atom;
        // atoms are in ascending degree order only for moment tables, so use
        // the plain bound `d <= budget` and let recursion prune the rest
        if let Some(b) = budget {
            if d > b {
                continue;
            }
        }
        chosen.push(i);
        let found = search_tuples(
            f,
            atoms,
            budget.map(|b| b - d),
            slots - 1,
            i,
            chosen,
            tol,
            hint,
        )?;
        chosen.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// The minimal `n <= max_n` for which [`certify_frobenius`] passes, with its
/// certificate; `None` if there is no such degree.
///
/// `f(1) = n` is one of the defining conditions, so the only candidate is
/// `f(1)` itself: if that is not a nonnegative integer at most `max_n`, or
/// its certificate fails, no degree passes.
pub fn frobenius_degree<S: Scalar, F: Functional<S>>(
    f: &F,
    max_n: u64,
    tol: f64,
) -> Result<Option<FrobeniusCertificate<S>>, FrobeniusError> {
    let f1 = f.unit_value();
    let recognition_tol = tol * (1.0 + f.magnitude_hint());
    let Some(k) = f1.to_integer(recognition_tol) else {
        return Ok(None);
    };
    if k < BigInt::from(0) || k > BigInt::from(max_n) {
        return Ok(None);
    }
    let n: u64 = k.try_into().expect("checked range above");
    let cert = certify_frobenius(f, n, tol)?;
    Ok(if cert.is_frobenius() {
        Some(cert)
    } else {
        None
    })
}

// ---------------------------------------------------------------------------
// Symmetric-power application and the padding formula
// ---------------------------------------------------------------------------

/// `Phi_n(f)(a_1,..,a_n) / n!`: the value of the induced functional on the
/// symmetrization of `a_1 (x) .. (x) a_n`. For a certified Frobenius
/// n-homomorphism this is a ring homomorphism on the symmetric power.
pub fn symmetric_tensor_apply<S: Scalar, F: Functional<S>>(
    f: &F,
    n: usize,
    tensor: &[F::Elem],
) -> Result<S, FrobeniusError> {
    if tensor.len() != n {
        return Err(AlgebraError::Invalid(format!(
            "symmetric tensor needs exactly {n} factors, got {}",
            tensor.len()
        ))
        .into());
    }
    let phi = phi_auto(f, tensor)?;
    let inv = S::from_bigint(&factorial(n))
        .invert()
        .expect("n! is nonzero");
    Ok(phi * inv)
}

/// The closed form `Phi_n(f)(a, 1, .., 1) = f(a) (f(1)-1) .. (f(1)-(n-1))`.
/// Must equal [`phi_permutation`] on the padded tuple.
pub fn phi_one_padding<S: Scalar, F: Functional<S>>(
    f: &F,
    a: &F::Elem,
    n: usize,
) -> Result<S, FrobeniusError> {
    if n == 0 {
        return Err(AlgebraError::Invalid("padding needs n >= 1".into()).into());
    }
    let f1 = f.unit_value();
    let mut acc = f.apply(a)?;
    for j in 1..n {
        acc = acc * (f1.clone() - S::from_i64(j as i64));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{
        evaluation_functional, FiniteFunctional, MomentFunctional, PointMultiset,
    };
    use crate::polynomial::Polynomial;
    use crate::scalar::GaussianRational;
    use num_traits::Zero;

    type Q = GaussianRational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn one_two(degree_bound: u32) -> MomentFunctional<Q> {
        let pts = PointMultiset::new(1, vec![(vec![q(1)], 1), (vec![q(2)], 1)]).unwrap();
        evaluation_functional(&pts, degree_bound)
    }

    fn u() -> Polynomial<Q> {
        Polynomial::variable(1, 0)
    }

    #[test]
    fn phi_one_is_f() {
        let f = one_two(3);
        assert_eq!(phi_permutation(&f, &[u()]).unwrap(), q(3));
        assert_eq!(phi_partition(&f, &[u()]).unwrap(), q(3));
        assert_eq!(phi_inductive(&f, &[u()]).unwrap(), q(3));
    }

    #[test]
    fn phi_two_diagonal() {
        // Phi_2(f)(a,a) = f(a)^2 - f(a^2) = 9 - 5 = 4
        let f = one_two(2);
        let args = [u(), u()];
        for phi in [
            phi_permutation(&f, &args).unwrap(),
            phi_partition(&f, &args).unwrap(),
            phi_inductive(&f, &args).unwrap(),
        ] {
            assert_eq!(phi, q(4));
        }
    }

    #[test]
    fn phi_three_diagonal_vanishes_for_two_points() {
        // 27 - 3*3*5 + 2*9 = 0
        let f = one_two(3);
        let args = [u(), u(), u()];
        assert!(phi_permutation(&f, &args).unwrap().is_zero());
        assert!(phi_partition(&f, &args).unwrap().is_zero());
        assert!(phi_inductive(&f, &args).unwrap().is_zero());
    }

    #[test]
    fn three_routes_agree_on_mixed_args() {
        let pts = PointMultiset::new(
            2,
            vec![
                (vec![q(1), q(-2)], 2),
                (vec![q(0), q(3)], 1),
                (vec![Q::from_ratio(1, 2), q(1)], 1),
            ],
        )
        .unwrap();
        let f = evaluation_functional(&pts, 10);
        let u1 = Polynomial::<Q>::variable(2, 0);
        let u2 = Polynomial::<Q>::variable(2, 1);
        let args = [
            u1.clone(),
            u1.mul(&u2).add(&Polynomial::one(2)),
            u2.pow(2).sub(&u1.scale(&q(3))),
            u1.add(&u2),
        ];
        let a = phi_permutation(&f, &args).unwrap();
        let b = phi_partition(&f, &args).unwrap();
        let c = phi_inductive(&f, &args).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);

        // finite algebra too
        let g = FiniteFunctional::<Q>::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![q(2), q(-1), Q::from_ratio(3, 4)],
        )
        .unwrap();
        let gargs = [
            vec![q(1), q(0), q(2)],
            vec![q(-1), q(3), q(1)],
            vec![q(0), q(2), q(5)],
        ];
        let a = phi_permutation(&g, &gargs).unwrap();
        let b = phi_partition(&g, &gargs).unwrap();
        let c = phi_inductive(&g, &gargs).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
    }

    #[test]
    fn unit_slot_identity() {
        // Phi_3(f)(1, a, b) = (f(1) - 2) * Phi_2(f)(a, b)
        let f = one_two(6); // f(1) = 2, so Phi_3 with a unit slot vanishes
        let a = u().pow(2);
        let b = u().add(&Polynomial::one(1));
        let args = [Polynomial::one(1), a.clone(), b.clone()];
        assert!(phi_permutation(&f, &args).unwrap().is_zero());

        // and for f(1) = 3 it equals Phi_2(a, b)
        let pts3 = PointMultiset::new(1, vec![(vec![q(1)], 1), (vec![q(2)], 1), (vec![q(-1)], 1)])
            .unwrap();
        let g = evaluation_functional(&pts3, 6);
        let lhs = phi_permutation(&g, &[Polynomial::one(1), a.clone(), b.clone()]).unwrap();
        let rhs = phi_permutation(&g, &[a, b]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn diagonal_series_for_two_points() {
        let f = one_two(5);
        let series = phi_diagonal_series(&f, &u(), 5).unwrap();
        // elementary symmetric functions of {1, 2}: e1 = 3, e2 = 2
        assert_eq!(series, vec![q(1), q(3), q(4), q(0), q(0), q(0)]);
    }

    #[test]
    fn diagonal_series_of_unit_hits_factorials() {
        for n in 1..=6u32 {
            let pts = PointMultiset::new(1, (0..n).map(|i| (vec![q(i as i64 + 1)], 1)).collect())
                .unwrap();
            let f = evaluation_functional(&pts, n + 1);
            let series = phi_diagonal_series(&f, &Polynomial::one(1), n as usize).unwrap();
            // Phi_k(1,..,1) = n (n-1) .. (n-k+1); at k = n this is n!
            let mut falling = q(1);
            for (k, coeff) in series.iter().enumerate() {
                assert_eq!(*coeff, falling, "n={n} k={k}");
                falling = falling * q(n as i64 - k as i64);
            }
            let nf: i64 = (1..=n as i64).product();
            assert_eq!(series[n as usize], q(nf));
        }
    }

    #[test]
    fn egf_matches_diagonal_series() {
        let f = one_two(8);
        let a = u();
        assert_eq!(
            egf_coefficients(&f, &a, 8).unwrap(),
            phi_diagonal_series(&f, &a, 8).unwrap()
        );
        let b = u().pow(2).sub(&u().scale(&q(2)));
        assert_eq!(
            egf_coefficients(&f, &b, 4).unwrap(),
            phi_diagonal_series(&f, &b, 4).unwrap()
        );
        assert_eq!(egf_coefficients(&f, &a, 1).unwrap(), vec![q(1), q(3)]);
    }

    #[test]
    fn egf_of_sum_is_pointwise_product() {
        let f = one_two(8);
        let pts = PointMultiset::new(1, vec![(vec![q(-1)], 1)]).unwrap();
        let g = evaluation_functional(&pts, 8);
        let sum = f.add(&g).unwrap();
        let n_max = 6;
        let a = u();
        let scale = |series: Vec<Q>| -> Vec<Q> {
            // back to EGF form: divide entry n by n!
            series
                .into_iter()
                .enumerate()
                .map(|(n, v)| {
                    let nf: i64 = (1..=n as i64).product();
                    v / q(nf)
                })
                .collect()
        };
        let ef = scale(egf_coefficients(&f, &a, n_max).unwrap());
        let eg = scale(egf_coefficients(&g, &a, n_max).unwrap());
        let esum = scale(egf_coefficients(&sum, &a, n_max).unwrap());
        for n in 0..=n_max {
            let mut conv = Q::zero();
            for r in 0..=n {
                conv = conv + ef[r].clone() * eg[n - r].clone();
            }
            assert_eq!(esum[n], conv, "t^{n}");
        }
    }

    #[test]
    fn certify_single_evaluation_is_degree_one() {
        let pts = PointMultiset::new(1, vec![(vec![q(5)], 1)]).unwrap();
        let f = evaluation_functional(&pts, 4);
        let cert = certify_frobenius(&f, 1, DEFAULT_TOLERANCE).unwrap();
        assert!(cert.is_frobenius());
        assert_eq!(cert.method, CertificationMethod::MonomialsToDegree(4));
        assert_eq!(cert.f1_value, q(1));
    }

    #[test]
    fn certify_two_points_passes_at_two_fails_at_one() {
        let f = one_two(6);
        let pass = certify_frobenius(&f, 2, DEFAULT_TOLERANCE).unwrap();
        assert!(pass.is_frobenius());

        // at n = 1, f(1) = 2 != 1 already fails the unit condition
        let fail = certify_frobenius(&f, 1, DEFAULT_TOLERANCE).unwrap();
        assert!(!fail.is_frobenius());
        assert!(matches!(
            fail.failure,
            Some(CertificateFailure::UnitValue { expected: 1, .. })
        ));

        // a functional with f(1) = 1 but two genuine points fails on a tuple:
        // halve the two-point evaluation so the unit check passes
        let mut halved = std::collections::BTreeMap::new();
        for (m, v) in f.moments() {
            halved.insert(m.clone(), v.clone() * Q::from_ratio(1, 2));
        }
        let h = MomentFunctional::new(1, 6, halved).unwrap();
        let cert = certify_frobenius(&h, 1, DEFAULT_TOLERANCE).unwrap();
        assert!(!cert.is_frobenius());
        match cert.failure.unwrap() {
            CertificateFailure::Tuple { elements, value } => {
                assert_eq!(elements, vec!["u1".to_string(), "u1".to_string()]);
                // Phi_2(h)(u,u) = (3/2)^2 - 5/2 = -1/4
                assert_eq!(value, Q::from_ratio(-1, 4));
            }
            other => panic!("expected tuple failure, got {other:?}"),
        }
    }

    #[test]
    fn certify_rejects_fractional_unit_value() {
        let f = FiniteFunctional::<Q>::new(
            vec!["a".into(), "b".into()],
            vec![Q::from_ratio(1, 2), q(1)],
        )
        .unwrap();
        for n in 0..=3 {
            let cert = certify_frobenius(&f, n, DEFAULT_TOLERANCE).unwrap();
            assert!(!cert.is_frobenius(), "n={n}");
            assert!(matches!(
                cert.failure,
                Some(CertificateFailure::UnitValue { .. })
            ));
        }
    }

    #[test]
    fn certify_demands_room_for_tuples() {
        let f = one_two(2);
        assert!(matches!(
            certify_frobenius(&f, 2, DEFAULT_TOLERANCE),
            Err(FrobeniusError::ScopeTooSmall {
                degree: 3,
                bound: 2
            })
        ));
    }

    #[test]
    fn monotone_vanishing_shows_as_unit_only_failure() {
        // certified at n = 2; at n = 3 every tuple still vanishes, so the
        // only failure is the unit condition f(1) = 2 != 3
        let f = one_two(6);
        let cert = certify_frobenius(&f, 3, DEFAULT_TOLERANCE).unwrap();
        assert!(matches!(
            cert.failure,
            Some(CertificateFailure::UnitValue { expected: 3, .. })
        ));
    }

    #[test]
    fn degree_search_finds_minimal_degree() {
        // three distinct evaluations -> 3
        let pts = PointMultiset::new(
            2,
            vec![
                (vec![q(1), q(2)], 1),
                (vec![q(0), q(-1)], 1),
                (vec![q(2), q(2)], 1),
            ],
        )
        .unwrap();
        let f = evaluation_functional(&pts, 5);
        let cert = frobenius_degree(&f, 6, DEFAULT_TOLERANCE).unwrap().unwrap();
        assert_eq!(cert.degree, 3);

        // zero functional -> 0
        let z = evaluation_functional(&PointMultiset::<Q>::empty(1), 2);
        let cert = frobenius_degree(&z, 4, DEFAULT_TOLERANCE).unwrap().unwrap();
        assert_eq!(cert.degree, 0);

        // one point with multiplicity 2 -> 2
        let dbl = PointMultiset::new(1, vec![(vec![q(3)], 2)]).unwrap();
        let f = evaluation_functional(&dbl, 4);
        let cert = frobenius_degree(&f, 5, DEFAULT_TOLERANCE).unwrap().unwrap();
        assert_eq!(cert.degree, 2);

        // fractional f(1) -> none
        let g = FiniteFunctional::<Q>::new(
            vec!["a".into(), "b".into()],
            vec![Q::from_ratio(1, 2), q(1)],
        )
        .unwrap();
        assert!(frobenius_degree(&g, 8, DEFAULT_TOLERANCE)
            .unwrap()
            .is_none());
    }

    #[test]
    fn symmetric_tensor_unit_and_products() {
        let f = one_two(8);
        // (1,..,1) -> 1
        let ones = vec![Polynomial::one(1); 2];
        assert_eq!(symmetric_tensor_apply(&f, 2, &ones).unwrap(), q(1));
        assert!(symmetric_tensor_apply(&f, 3, &ones).is_err());

        // ring-homomorphism check on the symmetric square:
        // h(a)h(b) = (1/2!) sum over phi in S_2 of h(a_i b_phi(i))
        let a = [u(), u().pow(2).sub(&Polynomial::one(1))];
        let b = [u().add(&Polynomial::one(1)), u().scale(&q(3))];
        let h = |t: &[Polynomial<Q>]| symmetric_tensor_apply(&f, 2, t).unwrap();
        let lhs = h(&a) * h(&b);
        let prod_id = [a[0].mul(&b[0]), a[1].mul(&b[1])];
        let prod_swap = [a[0].mul(&b[1]), a[1].mul(&b[0])];
        let rhs = (h(&prod_id) + h(&prod_swap)) / q(2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn padding_closed_form_matches_permutation_sum() {
        // n = 3, f(1) = 3: Phi_3(a, 1, 1) = 2 f(a)
        let pts3 = PointMultiset::new(1, vec![(vec![q(1)], 1), (vec![q(2)], 1), (vec![q(-1)], 1)])
            .unwrap();
        let f = evaluation_functional(&pts3, 6);
        let a = u().pow(2).add(&u());
        assert_eq!(phi_one_padding(&f, &a, 1).unwrap(), f.apply(&a).unwrap());
        assert_eq!(
            phi_one_padding(&f, &a, 3).unwrap(),
            f.apply(&a).unwrap() * q(2)
        );
        for n in 1..=4 {
            let mut args = vec![a.clone()];
            args.extend(std::iter::repeat_n(Polynomial::one(1), n - 1));
            assert_eq!(
                phi_one_padding(&f, &a, n).unwrap(),
                phi_permutation(&f, &args).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn arity_limits_are_enforced() {
        let f = one_two(3);
        let args = vec![u(); 10];
        assert!(matches!(
            phi_permutation(&f, &args),
            Err(FrobeniusError::ArityLimit {
                arity: 10,
                limit: 9
            })
        ));
        // the partition route still accepts 10
        assert!(phi_partition(&f, &args).is_err()); // degree 10 > bound 3
        let f8 = one_two(10);
        assert!(phi_partition(&f8, &args).unwrap().is_zero());
        assert!(phi_inductive(&f8, &args).unwrap().is_zero());
    }

    #[test]
    fn idempotent_values_are_integral_for_certified_finite_functionals() {
        let f = FiniteFunctional::<Q>::from_multiplicities(
            vec!["x".into(), "y".into(), "z".into()],
            &[2, 0, 3],
        )
        .unwrap();
        let cert = certify_frobenius(&f, 5, DEFAULT_TOLERANCE).unwrap();
        assert!(cert.is_frobenius());
        // every 0/1 vector is idempotent; its value must be an integer in [0, 5]
        for mask in 0..8u32 {
            let e: Vec<Q> = (0..3)
                .map(|i| if mask >> i & 1 == 1 { q(1) } else { q(0) })
                .collect();
            let v = f.apply(&e).unwrap();
            let int = v.to_integer(0.0).expect("idempotent value is integral");
            assert!(int >= 0.into() && int <= 5.into());
        }
    }
}
