//! Frobenius transformations of commutative algebras: the symmetric
//! multilinear maps `Phi_n(f)` attached to a linear functional `f`, the
//! functionals they characterize (sums of `n` point evaluations), and the
//! algorithms that recover those points.
//!
//! The crate is organized around three questions:
//!
//! * **Transform** ([`frobenius`]): evaluate `Phi_n(f)(a_1, .., a_n)` by
//!   three independent definitions — a signed sum over permutations, a
//!   weighted sum over set partitions, and an inductive recursion — plus
//!   diagonal/series forms and a certifier deciding whether `f` is a
//!   Frobenius `n`-homomorphism (`Phi_{n+1}(f) = 0` and `f(1) = n`).
//! * **Combinatorics** ([`partitions`]): the set-partition calculus behind
//!   the transform — signs, weights, the formal sum `chi`, partial
//!   pairings between two ground sets, and the gluing identity equating
//!   `chi(X) * chi(Y)` with a sum of pullbacks over all pairings.
//! * **Reconstruction** ([`reconstruct`], [`roots`]): decompose a
//!   certified functional into its point multiset, on finite sets (via
//!   indicator idempotents) and on polynomial or quotient algebras (via a
//!   separating form, Newton's identities, root extraction, and Lagrange
//!   interpolation), with exact arithmetic preferred and
//!   arbitrary-precision floats as the fallback.
//!
//! Algebras and functionals live in [`functional`] (finite sets and
//! moment tables over polynomial rings), with multivariate and univariate
//! polynomial arithmetic in [`polynomial`] and [`univariate`]. Everything
//! is generic over a [`Scalar`]; the two shipped scalar types are exact
//! Gaussian rationals and arbitrary-precision complex floats. The
//! [`selfcheck`] module bundles the acceptance suite the CLI exposes.

pub mod error;
pub mod frobenius;
pub mod functional;
pub mod partitions;
pub mod polynomial;
pub mod reconstruct;
pub mod roots;
pub mod scalar;
pub mod selfcheck;
pub mod univariate;

pub use scalar::{BigComplex, GaussianRational, Scalar};

/// Exact scalar: Gaussian rationals `a + bi` with arbitrary-precision
/// rational parts.
pub type ExactScalar = GaussianRational;

/// Float scalar: complex numbers with arbitrary-precision real and
/// imaginary parts.
pub type FloatScalar = BigComplex;

/// Multivariate polynomial over the exact scalar.
pub type ExactPolynomial = polynomial::Polynomial<ExactScalar>;

/// Multivariate polynomial over the float scalar.
pub type FloatPolynomial = polynomial::Polynomial<FloatScalar>;

/// Moment functional over the exact scalar.
pub type ExactMomentFunctional = functional::MomentFunctional<ExactScalar>;

/// Moment functional over the float scalar.
pub type FloatMomentFunctional = functional::MomentFunctional<FloatScalar>;

/// Functional on a finite set over the exact scalar.
pub type ExactFiniteFunctional = functional::FiniteFunctional<ExactScalar>;

/// Functional on a finite set over the float scalar.
pub type FloatFiniteFunctional = functional::FiniteFunctional<FloatScalar>;

/// Point multiset with exact coordinates.
pub type ExactPointMultiset = functional::PointMultiset<ExactScalar>;

/// Point multiset with float coordinates.
pub type FloatPointMultiset = functional::PointMultiset<FloatScalar>;
