//! Sparse multivariate polynomials over a scalar field.
//!
//! * [`Monomial`] — an exponent vector with graded-lexicographic ordering.
//! * [`Polynomial`] — a canonicalized term map `Monomial -> nonzero Scalar`.
//! * [`all_monomials_up_to_degree`] — the dense monomial basis used by
//!   moment tables and certification tuple enumeration.
//!
//! Polynomials never store zero coefficients, so structural equality is
//! mathematical equality over exact scalars.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::AlgebraError;
use crate::scalar::Scalar;

/// A monomial in `m` variables: the exponent vector of `u1^e1 * ... * um^em`.
/// Ordered by total degree first, then lexicographically with `u1` smallest.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    /// The unit monomial (all exponents zero).
    pub fn unit(num_vars: usize) -> Self {
        Monomial {
            exps: vec![0; num_vars],
        }
    }

    /// The single variable `u_{i+1}` (zero-based index).
    pub fn var(num_vars: usize, i: usize) -> Self {
        assert!(i < num_vars, "variable index out of range");
        let mut exps = vec![0; num_vars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn num_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // at equal degree, compare from the last variable so that
            // u1 < u2 < ... ; e.g. 1 < u1 < u2 < u1^2 < u1*u2 < u2^2
            self.exps.iter().rev().cmp(other.exps.iter().rev())
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "u{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// All monomials in `num_vars` variables of total degree at most `bound`,
/// in ascending graded-lex order. The count is `C(bound + num_vars, num_vars)`.
pub fn all_monomials_up_to_degree(num_vars: usize, bound: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; num_vars];
    fill(&mut exps, 0, bound, &mut out);
    out.sort();
    out
}

fn fill(exps: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if pos == exps.len() {
        out.push(Monomial::new(exps.clone()));
        return;
    }
    for e in 0..=remaining {
        exps[pos] = e;
        fill(exps, pos + 1, remaining - e, out);
    }
    exps[pos] = 0;
}

/// A sparse polynomial: a canonical map from monomials to nonzero
/// coefficients. All arithmetic re-canonicalizes, so `==` is mathematical
/// equality over exact scalars.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial<S: Scalar> {
    num_vars: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, S::one())
    }

    pub fn constant(num_vars: usize, c: S) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(Monomial::unit(num_vars), c);
        p
    }

    /// The variable `u_{i+1}` as a polynomial.
    pub fn variable(num_vars: usize, i: usize) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(Monomial::var(num_vars, i), S::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, S)>>(num_vars: usize, terms: I) -> Self {
        let mut p = Self::zero(num_vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Adds `c * m` in place, dropping the term if the coefficient cancels.
    pub fn add_term(&mut self, m: Monomial, c: S) {
        debug_assert_eq!(m.num_vars(), self.num_vars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.num_vars, other.num_vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        let mut out = Self::zero(self.num_vars);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.num_vars, other.num_vars);
        let mut out = Self::zero(self.num_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.num_vars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Evaluates at a point; a ring homomorphism in the polynomial argument.
    pub fn eval(&self, x: &[S]) -> Result<S, AlgebraError> {
        if x.len() != self.num_vars {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.num_vars,
                got: x.len(),
            });
        }
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    term = term * x[i].clone();
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }
}

impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest-degree terms first reads more naturally
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let cs = c.to_string();
            let simple = !cs[1..].contains(['+', '-']);
            if m.is_unit() {
                if simple {
                    write!(f, "{cs}")?;
                } else {
                    write!(f, "({cs})")?;
                }
            } else if cs == "1" {
                write!(f, "{m}")?;
            } else if simple {
                write!(f, "{cs}*{m}")?;
            } else {
                write!(f, "({cs})*{m}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    type Q = GaussianRational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let unit = Monomial::unit(2);
        let u1 = Monomial::var(2, 0);
        let u2 = Monomial::var(2, 1);
        let u1u2 = u1.mul(&u2);
        let u1sq = u1.mul(&u1);
        assert!(unit < u1);
        assert!(u1 < u2);
        assert!(u2 < u1sq);
        assert!(u1sq < u1u2);
        assert_eq!(u1u2.degree(), 2);
    }

    #[test]
    fn monomial_display() {
        assert_eq!(Monomial::unit(3).to_string(), "1");
        assert_eq!(Monomial::new(vec![2, 0, 1]).to_string(), "u1^2*u3");
    }

    #[test]
    fn monomial_basis_count() {
        // C(bound + m, m)
        assert_eq!(all_monomials_up_to_degree(1, 3).len(), 4);
        assert_eq!(all_monomials_up_to_degree(2, 2).len(), 6);
        assert_eq!(all_monomials_up_to_degree(3, 4).len(), 35);
        let basis = all_monomials_up_to_degree(2, 2);
        assert!(basis.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(basis[0], Monomial::unit(2));
    }

    #[test]
    fn arithmetic_cancels_to_canonical_form() {
        let u = Polynomial::<Q>::variable(1, 0);
        let p = u.mul(&u).sub(&Polynomial::constant(1, q(1))); // u^2 - 1
        let q_ = u.add(&Polynomial::one(1)); // u + 1
        let r = u.sub(&Polynomial::one(1)); // u - 1
        assert_eq!(q_.mul(&r), p);
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.degree(), Some(2));
        assert_eq!(Polynomial::<Q>::zero(1).degree(), None);
    }

    #[test]
    fn multiplication_degree_adds() {
        let u1 = Polynomial::<Q>::variable(2, 0);
        let u2 = Polynomial::<Q>::variable(2, 1);
        let p = u1.pow(2).add(&u2); // u1^2 + u2
        let r = p.mul(&p);
        assert_eq!(
            r.degree().unwrap(),
            p.degree().unwrap() + p.degree().unwrap()
        );
    }

    #[test]
    fn eval_is_ring_homomorphism() {
        let u1 = Polynomial::<Q>::variable(2, 0);
        let u2 = Polynomial::<Q>::variable(2, 1);
        let p = u1.mul(&u2); // u1*u2
        let x = [q(2), q(3)];
        assert_eq!(p.eval(&x).unwrap(), q(6));
        assert_eq!(Polynomial::<Q>::one(2).eval(&x).unwrap(), q(1));

        // u^2 - 3u + 2 vanishes at 1
        let u = Polynomial::<Q>::variable(1, 0);
        let poly = u
            .pow(2)
            .sub(&u.scale(&q(3)))
            .add(&Polynomial::constant(1, q(2)));
        assert_eq!(poly.eval(&[q(1)]).unwrap(), q(0));
        assert_eq!(poly.eval(&[q(3)]).unwrap(), q(2));

        // products evaluate to products
        let a = u1.add(&Polynomial::constant(2, q(5)));
        let b = u2.pow(2).sub(&u1);
        assert_eq!(
            a.mul(&b).eval(&x).unwrap(),
            a.eval(&x).unwrap() * b.eval(&x).unwrap()
        );

        assert!(p.eval(&[q(1)]).is_err());
    }

    #[test]
    fn display_reads_naturally() {
        let u = Polynomial::<Q>::variable(1, 0);
        let p = u
            .pow(2)
            .sub(&u.scale(&q(3)))
            .add(&Polynomial::constant(1, q(2)));
        assert_eq!(p.to_string(), "u1^2 + -3*u1 + 2");
        let gauss = Polynomial::constant(
            1,
            Q::new(
                num_rational::BigRational::from_integer(1.into()),
                num_rational::BigRational::from_integer(2.into()),
            ),
        );
        assert_eq!(gauss.mul(&u).to_string(), "(1+2i)*u1");
    }
}
