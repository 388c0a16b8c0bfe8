//! Linear functionals on the two supported commutative algebras.
//!
//! * [`FiniteFunctional`] — a functional on `C(X)` for a finite labeled set
//!   `X`, stored as its values on the indicator basis.
//! * [`MomentFunctional`] — a functional on `C[u1,..,um]` stored as a
//!   complete moment table up to a degree bound; degree overflow is a hard
//!   error, never silent truncation.
//! * [`PointMultiset`] — a multiset of points of `C^m` with positive integer
//!   multiplicities; [`evaluation_functional`] turns one into the moment
//!   table of "sum of evaluations", the oracle for every reconstruction
//!   test.
//!
//! The [`Functional`] trait is the access surface the Frobenius layer
//! computes through: the unit, products, application, and enough metadata
//! (certification atoms and scope) to drive tuple enumeration generically.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::AlgebraError;
use crate::polynomial::{all_monomials_up_to_degree, Monomial, Polynomial};
use crate::scalar::Scalar;

/// A linear functional together with the algebra it lives on: enough
/// structure to form products of elements and apply the functional.
pub trait Functional<S: Scalar> {
    type Elem: Clone + fmt::Debug;

    /// The unit of the algebra.
    fn one_elem(&self) -> Self::Elem;

    /// Product in the algebra.
    fn mul_elems(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, AlgebraError>;

    /// Applies the functional.
    fn apply(&self, a: &Self::Elem) -> Result<S, AlgebraError>;

    /// `f(1)`.
    fn unit_value(&self) -> S {
        self.apply(&self.one_elem())
            .expect("the unit is always in scope")
    }

    /// Basis elements (unit excluded) from which certification tuples are
    /// drawn, paired with the degree each contributes to a tuple's total.
    fn certification_atoms(&self) -> Vec<(Self::Elem, u32)>;

    /// `Some(D)`: tuples are capped at total degree `D` and the certificate
    /// is scoped "up to degree D". `None`: the atom set is a complete basis
    /// and certification is exhaustive.
    fn certification_scope(&self) -> Option<u32>;

    /// Scale of the stored data, `sum of |values|`; float-mode vanishing
    /// tests compare against `tol * (1 + this)`.
    fn magnitude_hint(&self) -> f64;

    /// Rendering for witnesses and error messages.
    fn describe_elem(&self, a: &Self::Elem) -> String {
        format!("{:?}", a)
    }
}

// ---------------------------------------------------------------------------
// FiniteFunctional
// ---------------------------------------------------------------------------

/// A functional on `C(X)` for a finite set `X` of labeled points: the value
/// vector on the indicator basis. Algebra elements are value vectors over
/// the same labels, multiplied pointwise.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct FiniteFunctional<S: Scalar> {
    labels: Vec<String>,
    values: Vec<S>,
}

impl<S: Scalar> FiniteFunctional<S> {
    pub fn new(labels: Vec<String>, values: Vec<S>) -> Result<Self, AlgebraError> {
        if labels.is_empty() {
            return Err(AlgebraError::Invalid("at least one point required".into()));
        }
        if labels.len() != values.len() {
            return Err(AlgebraError::DimensionMismatch {
                expected: labels.len(),
                got: values.len(),
            });
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(AlgebraError::Invalid("duplicate point labels".into()));
        }
        Ok(FiniteFunctional { labels, values })
    }

    /// The functional `sum multiplicity_r * ev_r`: values are the
    /// multiplicities themselves. This is the finite-set evaluation oracle.
    pub fn from_multiplicities(labels: Vec<String>, counts: &[u64]) -> Result<Self, AlgebraError> {
        let values = counts.iter().map(|&c| S::from_i64(c as i64)).collect();
        Self::new(labels, values)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// The indicator of the r-th point.
    pub fn indicator(&self, r: usize) -> Vec<S> {
        let mut e = vec![S::zero(); self.dim()];
        e[r] = S::one();
        e
    }

    /// The pointwise sum of two functionals over the same labels.
    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        if other.labels != self.labels {
            return Err(AlgebraError::Invalid("label sets differ".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Self::new(self.labels.clone(), values)
    }

    fn check_dim(&self, a: &[S]) -> Result<(), AlgebraError> {
        if a.len() != self.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim(),
                got: a.len(),
            });
        }
        Ok(())
    }
}

impl<S: Scalar> Functional<S> for FiniteFunctional<S> {
    type Elem = Vec<S>;

    fn one_elem(&self) -> Vec<S> {
        vec![S::one(); self.dim()]
    }

    fn mul_elems(&self, a: &Vec<S>, b: &Vec<S>) -> Result<Vec<S>, AlgebraError> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        Ok(a.iter()
            .zip(b)
            .map(|(x, y)| x.clone() * y.clone())
            .collect())
    }

    fn apply(&self, a: &Vec<S>) -> Result<S, AlgebraError> {
        self.check_dim(a)?;
        let mut acc = S::zero();
        for (v, x) in self.values.iter().zip(a) {
            acc = acc + v.clone() * x.clone();
        }
        Ok(acc)
    }

    fn certification_atoms(&self) -> Vec<(Vec<S>, u32)> {
        (0..self.dim()).map(|r| (self.indicator(r), 0)).collect()
    }

    fn certification_scope(&self) -> Option<u32> {
        None
    }

    fn magnitude_hint(&self) -> f64 {
        self.values.iter().map(Scalar::magnitude).sum()
    }

    fn describe_elem(&self, a: &Vec<S>) -> String {
        let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
        format!("[{}]", parts.join(", "))
    }
}

// ---------------------------------------------------------------------------
// MomentFunctional
// ---------------------------------------------------------------------------

/// A functional on `C[u1,..,um]` stored as its values on every monomial of
/// total degree at most the bound. Completeness is checked at construction;
/// applying to a polynomial that leaves the table is an error.
#[derive(Clone, PartialEq, Debug)]
pub struct MomentFunctional<S: Scalar> {
    num_vars: usize,
    degree_bound: u32,
    moments: BTreeMap<Monomial, S>,
}

impl<S: Scalar> MomentFunctional<S> {
    pub fn new(
        num_vars: usize,
        degree_bound: u32,
        moments: BTreeMap<Monomial, S>,
    ) -> Result<Self, AlgebraError> {
        if num_vars == 0 {
            return Err(AlgebraError::Invalid(
                "at least one variable required".into(),
            ));
        }
        for m in moments.keys() {
            if m.num_vars() != num_vars {
                return Err(AlgebraError::DimensionMismatch {
                    expected: num_vars,
                    got: m.num_vars(),
                });
            }
            if m.degree() > degree_bound {
                return Err(AlgebraError::Invalid(format!(
                    "moment {m} exceeds the degree bound {degree_bound}"
                )));
            }
        }
        let required = all_monomials_up_to_degree(num_vars, degree_bound).len();
        if moments.len() != required {
            return Err(AlgebraError::IncompleteMoments {
                present: moments.len(),
                required,
                bound: degree_bound,
            });
        }
        Ok(MomentFunctional {
            num_vars,
            degree_bound,
            moments,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn moments(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.moments.iter()
    }

    pub fn moment(&self, m: &Monomial) -> Option<&S> {
        self.moments.get(m)
    }

    /// The pointwise sum of two functionals on the same algebra with the
    /// same degree bound. The sum of Frobenius m- and n-homomorphisms is a
    /// Frobenius (m+n)-homomorphism.
    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        if other.num_vars != self.num_vars {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.num_vars,
                got: other.num_vars,
            });
        }
        if other.degree_bound != self.degree_bound {
            return Err(AlgebraError::Invalid(format!(
                "degree bounds differ: {} vs {}",
                self.degree_bound, other.degree_bound
            )));
        }
        let moments = self
            .moments
            .iter()
            .map(|(m, v)| {
                let w = other.moments.get(m).expect("both tables are complete");
                (m.clone(), v.clone() + w.clone())
            })
            .collect();
        MomentFunctional::new(self.num_vars, self.degree_bound, moments)
    }
}

impl<S: Scalar> Functional<S> for MomentFunctional<S> {
    type Elem = Polynomial<S>;

    fn one_elem(&self) -> Polynomial<S> {
        Polynomial::one(self.num_vars)
    }

    fn mul_elems(
        &self,
        a: &Polynomial<S>,
        b: &Polynomial<S>,
    ) -> Result<Polynomial<S>, AlgebraError> {
        if a.num_vars() != self.num_vars || b.num_vars() != self.num_vars {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.num_vars,
                got: a.num_vars().max(b.num_vars()),
            });
        }
        Ok(a.mul(b))
    }

    fn apply(&self, a: &Polynomial<S>) -> Result<S, AlgebraError> {
        if a.num_vars() != self.num_vars {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.num_vars,
                got: a.num_vars(),
            });
        }
        let mut acc = S::zero();
        for (m, c) in a.terms() {
            let moment = self.moments.get(m).ok_or(AlgebraError::DegreeOverflow {
                degree: m.degree(),
                bound: self.degree_bound,
            })?;
            acc = acc + c.clone() * moment.clone();
        }
        Ok(acc)
    }

    fn certification_atoms(&self) -> Vec<(Polynomial<S>, u32)> {
        all_monomials_up_to_degree(self.num_vars, self.degree_bound)
            .into_iter()
            .filter(|m| !m.is_unit())
            .map(|m| {
                let d = m.degree();
                (Polynomial::from_terms(self.num_vars, [(m, S::one())]), d)
            })
            .collect()
    }

    fn certification_scope(&self) -> Option<u32> {
        Some(self.degree_bound)
    }

    fn magnitude_hint(&self) -> f64 {
        self.moments.values().map(Scalar::magnitude).sum()
    }

    fn describe_elem(&self, a: &Polynomial<S>) -> String {
        a.to_string()
    }
}

// ---------------------------------------------------------------------------
// PointMultiset
// ---------------------------------------------------------------------------

/// A multiset of points of `C^m` with positive integer multiplicities, held
/// in a canonical order (points sorted coordinate-lexicographically).
/// Exactly equal points are merged at construction.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct PointMultiset<S: Scalar> {
    num_vars: usize,
    entries: Vec<(Vec<S>, u64)>,
}

impl<S: Scalar> PointMultiset<S> {
    pub fn new(num_vars: usize, entries: Vec<(Vec<S>, u64)>) -> Result<Self, AlgebraError> {
        let mut merged: Vec<(Vec<S>, u64)> = Vec::new();
        for (point, mult) in entries {
            if point.len() != num_vars {
                return Err(AlgebraError::DimensionMismatch {
                    expected: num_vars,
                    got: point.len(),
                });
            }
            if mult == 0 {
                return Err(AlgebraError::Invalid("zero multiplicity".into()));
            }
            match merged.iter_mut().find(|(p, _)| *p == point) {
                Some((_, m)) => *m += mult,
                None => merged.push((point, mult)),
            }
        }
        merged.sort_by(|(p, _), (q, _)| {
            p.iter()
                .zip(q)
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| *o != std::cmp::Ordering::Equal)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        Ok(PointMultiset {
            num_vars,
            entries: merged,
        })
    }

    pub fn empty(num_vars: usize) -> Self {
        PointMultiset {
            num_vars,
            entries: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn entries(&self) -> &[(Vec<S>, u64)] {
        &self.entries
    }

    pub fn num_distinct(&self) -> usize {
        self.entries.len()
    }

    /// Total multiplicity: the degree `n` of the functional it models.
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }
}

impl<S: Scalar> fmt::Display for PointMultiset<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (p, m)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let coords: Vec<String> = p.iter().map(|c| c.to_string()).collect();
            write!(f, "({}):{}", coords.join(","), m)?;
        }
        write!(f, "}}")
    }
}

/// A multiset over the labels of a finite set: the output of the finite
/// decomposition, where points are named rather than coordinatized.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LabelMultiset {
    entries: Vec<(String, u64)>,
}

impl LabelMultiset {
    /// Canonicalizes: merges duplicate labels, drops zero counts, sorts.
    pub fn new(entries: Vec<(String, u64)>) -> Self {
        let mut map: BTreeMap<String, u64> = BTreeMap::new();
        for (l, c) in entries {
            if c > 0 {
                *map.entry(l).or_insert(0) += c;
            }
        }
        LabelMultiset {
            entries: map.into_iter().collect(),
        }
    }

    pub fn entries(&self) -> &[(String, u64)] {
        &self.entries
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|(_, c)| c).sum()
    }
}

impl fmt::Display for LabelMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (l, c)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}:{c}")?;
        }
        write!(f, "]")
    }
}

/// The moment table of `sum multiplicity_j * ev_{point_j}` up to the degree
/// bound: `moments[alpha] = sum_j m_j * point_j^alpha`. This is the oracle
/// against which every reconstruction is tested.
pub fn evaluation_functional<S: Scalar>(
    points: &PointMultiset<S>,
    degree_bound: u32,
) -> MomentFunctional<S> {
    let m = points.num_vars();
    let mut moments = BTreeMap::new();
    for alpha in all_monomials_up_to_degree(m, degree_bound) {
        let mut acc = S::zero();
        for (point, mult) in points.entries() {
            let mut pw = S::from_i64(*mult as i64);
            for (i, &e) in alpha.exponents().iter().enumerate() {
                for _ in 0..e {
                    pw = pw * point[i].clone();
                }
            }
            acc = acc + pw;
        }
        moments.insert(alpha, acc);
    }
    MomentFunctional::new(m, degree_bound, moments).expect("enumeration produces a complete table")
}
