//! Error types, one enum per subsystem.

use thiserror::Error;

/// Scalar parsing and conversion failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalarError {
    #[error("cannot parse {text:?} as a rational: {reason}")]
    BadRational { text: String, reason: String },
}

/// Set-partition and pairing enumeration failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartitionError {
    #[error("ground size {requested} exceeds the enumeration limit {limit}")]
    SizeLimit { requested: usize, limit: usize },
    #[error("invalid partition data: {0}")]
    Invalid(String),
    #[error("invalid pairing data: {0}")]
    InvalidPairing(String),
}

/// Algebra and functional evaluation failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degree {degree} exceeds the moment table bound {bound}")]
    DegreeOverflow { degree: u32, bound: u32 },
    #[error("element has {got} values but the functional has {expected} labels")]
    LabelMismatch { expected: usize, got: usize },
    #[error("moment table is incomplete: {present} of {required} monomials up to degree {bound}")]
    IncompleteMoments {
        present: usize,
        required: usize,
        bound: u32,
    },
    #[error("invalid data: {0}")]
    Invalid(String),
}

/// Frobenius transformation and certification failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrobeniusError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{arity} arguments exceed the permutation-sum limit {limit}")]
    ArityLimit { arity: usize, limit: usize },
    #[error("degree bound {bound} is too small to certify degree {degree}: no tuple fits")]
    ScopeTooSmall { degree: usize, bound: u32 },
}

/// Root extraction failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("roots are not all rational; {remaining} of {degree} factor degrees unresolved")]
    Irrational { degree: usize, remaining: usize },
    #[error("root finding did not converge after {iterations} iterations (last correction {last_correction:e})")]
    NoConvergence {
        iterations: usize,
        last_correction: f64,
    },
    #[error("ambiguous root clusters separated by {separation:e} (tolerance {tol:e})")]
    AmbiguousClusters { separation: f64, tol: f64 },
}

/// Decomposition pipeline failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReconstructError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("functional is not a Frobenius homomorphism: {0}")]
    NotFrobenius(String),
    #[error("inconsistent decomposition: {0}")]
    Inconsistent(String),
    #[error("functional does not annihilate the ideal: f({generator} * {monomial}) = {value}")]
    IdealNotAnnihilated {
        generator: String,
        monomial: String,
        value: String,
    },
    #[error(
        "recovered point {point} is off the variety: generator {generator} evaluates to {value}"
    )]
    OffVariety {
        point: String,
        generator: String,
        value: String,
    },
    #[error("reconstruction failed after {retries} retries; best residual {best_residual:e}")]
    Failed { retries: u32, best_residual: f64 },
    #[error("numerical failure: {0}")]
    Numerical(RootError),
}
