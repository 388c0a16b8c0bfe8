//! `frobsym` — command-line front end for Frobenius transformations of
//! linear functionals on commutative algebras.
//!
//! Subcommands:
//!
//! * `phi` — apply the transformation `Phi_k(f)` to explicit elements, by
//!   any or all of its three equivalent definitions;
//! * `degree` — certify a functional as a Frobenius n-homomorphism and
//!   report the degree found;
//! * `decompose` — reconstruct the weighted point multiset behind a
//!   functional, optionally constrained to the zero set of an ideal;
//! * `verify-identity` — check the partition gluing identity for one pair
//!   of ground-set sizes;
//! * `selfcheck` — run the built-in acceptance criteria.
//!
//! Every successful run prints one report object to stdout: single-line
//! JSON by default, human-readable text with `--pretty`. Errors print
//! `{"error": {"kind", "message"}}` to stderr and exit with 2 (invalid
//! input), 3 (numerical failure), or 4 (the functional is not a Frobenius
//! homomorphism of the requested degree).

mod doc;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use frobsym::error::{AlgebraError, FrobeniusError, PartitionError, ReconstructError};
use frobsym::frobenius::{
    frobenius_degree, phi_inductive, phi_partition, phi_permutation, DEFAULT_TOLERANCE,
};
use frobsym::functional::Functional;
use frobsym::partitions::verify_pairing_identity;
use frobsym::polynomial::Polynomial;
use frobsym::reconstruct::{
    decompose_adaptive, decompose_finite, decompose_quotient, lift_polynomial, AdaptiveReport,
    DecomposeOptions, ReconstructionReport, DEFAULT_MAX_RETRIES,
};
use frobsym::selfcheck;
use frobsym::{BigComplex, GaussianRational, Scalar};

use crate::doc::{lift_ideal, load_functional, load_ideal, LoadedFunctional};
use crate::parse::{parse_polynomial, parse_vector};

type Q = GaussianRational;
type C = BigComplex;

// ---------------------------------------------------------------------------
// Errors and exit codes
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CliErrorKind {
    /// Bad arguments or malformed input files; exit code 2.
    Validation,
    /// Root finding or reconstruction did not converge; exit code 3.
    Numerical,
    /// The input provably fails the Frobenius conditions; exit code 4.
    NotFrobenius,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: CliErrorKind,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            kind: CliErrorKind::Validation,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError {
            kind: CliErrorKind::Numerical,
            message: message.into(),
        }
    }

    pub fn not_frobenius(message: impl Into<String>) -> Self {
        CliError {
            kind: CliErrorKind::NotFrobenius,
            message: message.into(),
        }
    }

    fn kind_str(&self) -> &'static str {
        match self.kind {
            CliErrorKind::Validation => "validation",
            CliErrorKind::Numerical => "numerical",
            CliErrorKind::NotFrobenius => "not-frobenius",
        }
    }

    fn exit_code(&self) -> u8 {
        match self.kind {
            CliErrorKind::Validation => 2,
            CliErrorKind::Numerical => 3,
            CliErrorKind::NotFrobenius => 4,
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::validation(e.to_string())
    }
}

impl From<FrobeniusError> for CliError {
    fn from(e: FrobeniusError) -> Self {
        CliError::validation(e.to_string())
    }
}

impl From<PartitionError> for CliError {
    fn from(e: PartitionError) -> Self {
        CliError::validation(e.to_string())
    }
}

impl From<ReconstructError> for CliError {
    fn from(e: ReconstructError) -> Self {
        match &e {
            ReconstructError::NotFrobenius(_)
            | ReconstructError::Inconsistent(_)
            | ReconstructError::IdealNotAnnihilated { .. }
            | ReconstructError::OffVariety { .. } => CliError::not_frobenius(e.to_string()),
            ReconstructError::Failed { .. } | ReconstructError::Numerical(_) => {
                CliError::numerical(e.to_string())
            }
            ReconstructError::Algebra(_) => CliError::validation(e.to_string()),
        }
    }
}

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "frobsym",
    version,
    about = "Frobenius n-homomorphisms: transform, certify, decompose",
    propagate_version = true
)]
struct Cli {
    /// Print human-readable text instead of a JSON report.
    #[arg(long, global = true)]
    pretty: bool,

    /// Include wall-clock timing in the report (off by default so equal
    /// runs produce byte-identical output).
    #[arg(long, global = true)]
    timing: bool,

    /// Worker threads. Reserved for future parallel evaluation; accepted
    /// and validated, currently single-threaded.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply Phi_k(f) to k elements by the chosen definition(s).
    Phi(PhiArgs),
    /// Find and certify the Frobenius degree of a functional.
    Degree(DegreeArgs),
    /// Reconstruct the point multiset representing a functional.
    Decompose(DecomposeArgs),
    /// Check the partition gluing identity for one size pair.
    VerifyIdentity(VerifyIdentityArgs),
    /// Run the built-in acceptance criteria.
    Selfcheck(SelfcheckArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScalarMode {
    /// Gaussian-rational arithmetic; zero tests are decidable.
    Exact,
    /// Arbitrary-precision binary floats; zero tests use the tolerance.
    Float,
}

impl ScalarMode {
    fn as_str(self) -> &'static str {
        match self {
            ScalarMode::Exact => "exact",
            ScalarMode::Float => "float",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Signed sum over permutations of the arguments.
    Perm,
    /// Signed, weighted sum over set partitions of the arguments.
    Part,
    /// The inductive two-term recursion.
    Ind,
    /// All three, with a cross-check that they agree.
    All,
}

/// Flags shared by the commands that load a functional document.
#[derive(Args)]
struct NumericArgs {
    /// Scalar arithmetic to run in. Float-encoded documents require
    /// `float`; exact documents work in either.
    #[arg(long, value_enum, default_value_t = ScalarMode::Exact)]
    mode: ScalarMode,

    /// Mantissa bits for float arithmetic.
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u32).range(32..=65536))]
    precision: u32,

    /// Restrict a moment document to a smaller degree bound before use.
    #[arg(long)]
    degree_bound: Option<u32>,

    /// Relative tolerance for float-mode zero tests and verification.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
}

#[derive(Args)]
struct PhiArgs {
    /// Functional document (JSON).
    #[arg(long)]
    input: PathBuf,

    /// Which definition(s) of the transformation to evaluate.
    #[arg(long, value_enum, default_value_t = Method::All)]
    method: Method,

    #[command(flatten)]
    numeric: NumericArgs,

    /// Elements to feed to Phi_k: coordinate vectors like "[1, 0, 2]" for
    /// finite functionals, polynomials like "u1^2 - 3/2*u2" for moment
    /// functionals. The arity k is the number of elements given.
    #[arg(required = true)]
    elements: Vec<String>,
}

#[derive(Args)]
struct DegreeArgs {
    /// Functional document (JSON).
    #[arg(long)]
    input: PathBuf,

    /// Largest degree to consider.
    #[arg(long, default_value_t = 16)]
    max_n: u64,

    #[command(flatten)]
    numeric: NumericArgs,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Functional document (JSON).
    #[arg(long)]
    input: PathBuf,

    /// Asserted degree: the total multiplicity to reconstruct.
    #[arg(long)]
    n: u64,

    /// Ideal document (JSON); recovered points must lie on its zero set.
    #[arg(long)]
    ideal: Option<PathBuf>,

    /// Seed for the separating-form draws.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[command(flatten)]
    numeric: NumericArgs,
}

#[derive(Args)]
struct VerifyIdentityArgs {
    /// Size of the left ground set.
    #[arg(long)]
    left: usize,

    /// Size of the right ground set.
    #[arg(long)]
    right: usize,
}

#[derive(Args)]
struct SelfcheckArgs {
    /// Seed for the randomized criteria.
    #[arg(long, default_value_t = selfcheck::ACCEPTANCE_SEED)]
    seed: u64,
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct RunReport {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_digest: Option<String>,
    scalar_mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    /// Milliseconds of wall clock; always present, null unless --timing.
    timing_ms: Option<u64>,
    outputs: serde_json::Value,
}

impl RunReport {
    fn new(command: &'static str, scalar_mode: &'static str, outputs: serde_json::Value) -> Self {
        RunReport {
            command,
            input_digest: None,
            scalar_mode,
            tolerance: None,
            seed: None,
            timing_ms: None,
            outputs,
        }
    }
}

struct CommandOutcome {
    report: RunReport,
    pretty: Vec<String>,
    exit: u8,
}

fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("report types serialize to JSON")
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let cli = Cli::parse();
    let _ = cli.threads; // validated by clap; reserved until evaluation parallelizes
    let started = Instant::now();
    match dispatch(&cli) {
        Ok(mut outcome) => {
            outcome.report.timing_ms = cli
                .timing
                .then(|| u64::try_from(started.elapsed().as_millis()).unwrap_or(u64::MAX));
            if cli.pretty {
                for line in &outcome.pretty {
                    println!("{line}");
                }
            } else {
                let line = serde_json::to_string(&outcome.report).expect("report serializes");
                println!("{line}");
            }
            ExitCode::from(outcome.exit)
        }
        Err(e) => {
            let payload = json!({"error": {"kind": e.kind_str(), "message": e.message}});
            eprintln!("{payload}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: &Cli) -> Result<CommandOutcome, CliError> {
    let numeric = match &cli.command {
        Command::Phi(a) => Some(&a.numeric),
        Command::Degree(a) => Some(&a.numeric),
        Command::Decompose(a) => Some(&a.numeric),
        Command::VerifyIdentity(_) | Command::Selfcheck(_) => None,
    };
    if let Some(numeric) = numeric {
        if numeric.mode == ScalarMode::Float {
            // constants created during evaluation should match the inputs
            frobsym::scalar::set_float_precision(numeric.precision);
        }
    }
    match &cli.command {
        Command::Phi(args) => run_phi(args),
        Command::Degree(args) => run_degree(args),
        Command::Decompose(args) => run_decompose(args),
        Command::VerifyIdentity(args) => run_verify_identity(args),
        Command::Selfcheck(args) => run_selfcheck(args),
    }
}

// ---------------------------------------------------------------------------
// phi
// ---------------------------------------------------------------------------

fn run_phi(args: &PhiArgs) -> Result<CommandOutcome, CliError> {
    let numeric = &args.numeric;
    let (loaded, digest) = load_functional(
        &args.input,
        numeric.mode,
        numeric.precision,
        numeric.degree_bound,
    )?;
    let (outputs, pretty) = match &loaded {
        LoadedFunctional::ExactFinite(f) => {
            let elems = parse_vectors(&args.elements, f.dim())?;
            phi_report(f, &elems, &args.elements, args.method, numeric.tol)?
        }
        LoadedFunctional::FloatFinite(f) => {
            let elems: Vec<Vec<C>> = parse_vectors(&args.elements, f.dim())?
                .into_iter()
                .map(|v| {
                    v.iter()
                        .map(|q| C::from_exact(q, numeric.precision))
                        .collect()
                })
                .collect();
            phi_report(f, &elems, &args.elements, args.method, numeric.tol)?
        }
        LoadedFunctional::ExactMoments(f) => {
            let elems = parse_polynomials(&args.elements, f.num_vars())?;
            phi_report(f, &elems, &args.elements, args.method, numeric.tol)?
        }
        LoadedFunctional::FloatMoments(f) => {
            let elems: Vec<Polynomial<C>> = parse_polynomials(&args.elements, f.num_vars())?
                .iter()
                .map(|p| lift_polynomial(p, numeric.precision))
                .collect();
            phi_report(f, &elems, &args.elements, args.method, numeric.tol)?
        }
    };
    let mut report = RunReport::new("phi", loaded.mode().as_str(), outputs);
    report.input_digest = Some(digest);
    report.tolerance = Some(numeric.tol);
    Ok(CommandOutcome {
        report,
        pretty,
        exit: 0,
    })
}

fn parse_vectors(texts: &[String], dim: usize) -> Result<Vec<Vec<Q>>, CliError> {
    texts
        .iter()
        .map(|text| {
            let v = parse_vector(text)
                .map_err(|e| CliError::validation(format!("element {text:?}: {e}")))?;
            if v.len() != dim {
                return Err(CliError::validation(format!(
                    "element {text:?} has {} coordinates, the functional has {dim}",
                    v.len()
                )));
            }
            Ok(v)
        })
        .collect()
}

fn parse_polynomials(texts: &[String], num_vars: usize) -> Result<Vec<Polynomial<Q>>, CliError> {
    texts
        .iter()
        .map(|text| {
            parse_polynomial(text, num_vars)
                .map_err(|e| CliError::validation(format!("element {text:?}: {e}")))
        })
        .collect()
}

fn phi_report<S: Scalar, F: Functional<S>>(
    f: &F,
    elems: &[F::Elem],
    texts: &[String],
    method: Method,
    tol: f64,
) -> Result<(serde_json::Value, Vec<String>), CliError> {
    type PhiFn<S, F> = fn(&F, &[<F as Functional<S>>::Elem]) -> Result<S, FrobeniusError>;
    let selected: Vec<(&'static str, PhiFn<S, F>)> = match method {
        Method::Perm => vec![("permutation", phi_permutation)],
        Method::Part => vec![("partition", phi_partition)],
        Method::Ind => vec![("inductive", phi_inductive)],
        Method::All => vec![
            ("permutation", phi_permutation),
            ("partition", phi_partition),
            ("inductive", phi_inductive),
        ],
    };
    let mut methods = serde_json::Map::new();
    let mut values: Vec<S> = Vec::new();
    let mut pretty = vec![format!("Phi_{}(f) of {}:", elems.len(), texts.join(", "))];
    for (name, body) in &selected {
        let value = body(f, elems)?;
        methods.insert((*name).to_string(), to_json(&value));
        pretty.push(format!("  {name}: {value}"));
        values.push(value);
    }
    let agree = (values.len() > 1).then(|| {
        let hint = f.magnitude_hint();
        values.windows(2).all(|w| {
            let diff = w[0].clone() - w[1].clone();
            if S::EXACT {
                diff.is_zero()
            } else {
                diff.magnitude() <= tol * (1.0 + hint)
            }
        })
    });
    if let Some(a) = agree {
        pretty.push(format!("  methods agree: {}", if a { "yes" } else { "NO" }));
    }
    let outputs = json!({
        "arity": elems.len(),
        "elements": texts,
        "methods": methods,
        "methods_agree": agree,
    });
    Ok((outputs, pretty))
}

// ---------------------------------------------------------------------------
// degree
// ---------------------------------------------------------------------------

fn run_degree(args: &DegreeArgs) -> Result<CommandOutcome, CliError> {
    let numeric = &args.numeric;
    let (loaded, digest) = load_functional(
        &args.input,
        numeric.mode,
        numeric.precision,
        numeric.degree_bound,
    )?;
    let (outputs, pretty) = match &loaded {
        LoadedFunctional::ExactFinite(f) => degree_report(f, args.max_n, numeric.tol)?,
        LoadedFunctional::FloatFinite(f) => degree_report(f, args.max_n, numeric.tol)?,
        LoadedFunctional::ExactMoments(f) => degree_report(f, args.max_n, numeric.tol)?,
        LoadedFunctional::FloatMoments(f) => degree_report(f, args.max_n, numeric.tol)?,
    };
    let mut report = RunReport::new("degree", loaded.mode().as_str(), outputs);
    report.input_digest = Some(digest);
    report.tolerance = Some(numeric.tol);
    Ok(CommandOutcome {
        report,
        pretty,
        exit: 0,
    })
}

fn degree_report<S: Scalar, F: Functional<S>>(
    f: &F,
    max_n: u64,
    tol: f64,
) -> Result<(serde_json::Value, Vec<String>), CliError> {
    let certificate = frobenius_degree(f, max_n, tol)?;
    let (scope, scope_pretty) = match f.certification_scope() {
        None => (
            "exhaustive basis".to_string(),
            "certified over the whole basis".to_string(),
        ),
        Some(d) => (
            format!("monomials up to degree {d}"),
            format!("certified up to degree {d}"),
        ),
    };
    let pretty = match &certificate {
        Some(c) => vec![format!(
            "Frobenius degree {} (f(1) = {}; {scope_pretty})",
            c.degree, c.f1_value
        )],
        None => vec![format!(
            "not a Frobenius n-homomorphism for any n <= {max_n}"
        )],
    };
    let outputs = json!({
        "max_n": max_n,
        "degree": certificate.as_ref().map(|c| c.degree),
        "scope": scope,
        "certificate": certificate,
    });
    Ok((outputs, pretty))
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

fn run_decompose(args: &DecomposeArgs) -> Result<CommandOutcome, CliError> {
    let numeric = &args.numeric;
    let (loaded, digest) = load_functional(
        &args.input,
        numeric.mode,
        numeric.precision,
        numeric.degree_bound,
    )?;
    let opts = DecomposeOptions {
        seed: args.seed,
        tolerance: numeric.tol,
        max_retries: DEFAULT_MAX_RETRIES,
    };
    let mut ideal_digest: Option<String> = None;
    let (mut outputs, pretty) = match &loaded {
        LoadedFunctional::ExactFinite(f) => {
            reject_ideal_for_finite(args)?;
            finite_decompose_report(&decompose_finite(f, args.n)?, args.n)
        }
        LoadedFunctional::FloatFinite(f) => {
            reject_ideal_for_finite(args)?;
            finite_decompose_report(&decompose_finite(f, args.n)?, args.n)
        }
        LoadedFunctional::ExactMoments(f) => {
            let generators = match &args.ideal {
                Some(path) => {
                    let (g, d) = load_ideal(path, f.num_vars())?;
                    ideal_digest = Some(d);
                    g
                }
                None => Vec::new(),
            };
            let report = decompose_adaptive(f, &generators, args.n, &opts, numeric.precision)?;
            adaptive_decompose_report(&report, args.n)
        }
        LoadedFunctional::FloatMoments(f) => {
            let generators = match &args.ideal {
                Some(path) => {
                    let (g, d) = load_ideal(path, f.num_vars())?;
                    ideal_digest = Some(d);
                    lift_ideal(&g, numeric.precision)
                }
                None => Vec::new(),
            };
            let report = AdaptiveReport::Float(decompose_quotient(f, &generators, args.n, &opts)?);
            adaptive_decompose_report(&report, args.n)
        }
    };
    if let (Some(d), serde_json::Value::Object(map)) = (ideal_digest, &mut outputs) {
        map.insert("ideal_digest".to_string(), json!(d));
    }
    let mut report = RunReport::new("decompose", loaded.mode().as_str(), outputs);
    report.input_digest = Some(digest);
    report.tolerance = Some(numeric.tol);
    report.seed = Some(args.seed);
    Ok(CommandOutcome {
        report,
        pretty,
        exit: 0,
    })
}

fn reject_ideal_for_finite(args: &DecomposeArgs) -> Result<(), CliError> {
    if args.ideal.is_some() {
        return Err(CliError::validation(
            "--ideal applies only to moment documents",
        ));
    }
    Ok(())
}

fn finite_decompose_report(
    multiset: &frobsym::functional::LabelMultiset,
    n: u64,
) -> (serde_json::Value, Vec<String>) {
    let mut pretty = vec![format!(
        "{} point(s) over {} label(s):",
        multiset.total(),
        multiset.entries().len()
    )];
    for (label, count) in multiset.entries() {
        pretty.push(format!("  {count} x {label}"));
    }
    let outputs = json!({"n": n, "kind": "finite", "multiset": multiset});
    (outputs, pretty)
}

fn adaptive_decompose_report(report: &AdaptiveReport, n: u64) -> (serde_json::Value, Vec<String>) {
    let pretty = match report {
        AdaptiveReport::Exact(r) => pretty_reconstruction(r, "exact"),
        AdaptiveReport::Float(r) => pretty_reconstruction(r, "float"),
    };
    let outputs = json!({"n": n, "kind": "moments", "decomposition": report});
    (outputs, pretty)
}

fn pretty_reconstruction<S: Scalar>(r: &ReconstructionReport<S>, mode: &str) -> Vec<String> {
    let mut lines = vec![format!(
        "{} point(s), {} distinct ({mode} arithmetic):",
        r.points.total(),
        r.points.num_distinct()
    )];
    for (point, mult) in r.points.entries() {
        let coords: Vec<String> = point.iter().map(|c| c.to_string()).collect();
        lines.push(format!("  {mult} x ({})", coords.join(", ")));
    }
    lines.push(format!("residual {:e}, retries {}", r.residual, r.retries));
    lines
}

// ---------------------------------------------------------------------------
// verify-identity
// ---------------------------------------------------------------------------

fn run_verify_identity(args: &VerifyIdentityArgs) -> Result<CommandOutcome, CliError> {
    let identity = verify_pairing_identity(args.left, args.right)?;
    let pretty = if identity.equal {
        vec![format!(
            "gluing identity holds for sizes ({}, {}): {} pairings summed, {} = {} terms",
            identity.left_size,
            identity.right_size,
            identity.pairings_summed,
            identity.lhs_terms,
            identity.rhs_terms
        )]
    } else {
        let d = identity
            .first_difference
            .as_ref()
            .expect("unequal report carries a difference");
        vec![format!(
            "gluing identity FAILS for sizes ({}, {}): partition {} has coefficients {} vs {}",
            identity.left_size,
            identity.right_size,
            d.partition,
            d.lhs_coefficient,
            d.rhs_coefficient
        )]
    };
    let exit = if identity.equal { 0 } else { 3 };
    let report = RunReport::new("verify-identity", "exact", to_json(&identity));
    Ok(CommandOutcome {
        report,
        pretty,
        exit,
    })
}

// ---------------------------------------------------------------------------
// selfcheck
// ---------------------------------------------------------------------------

fn run_selfcheck(args: &SelfcheckArgs) -> Result<CommandOutcome, CliError> {
    let results = selfcheck::run_all(args.seed);
    let passed = results.iter().filter(|r| r.passed).count();
    let all_passed = passed == results.len();
    let mut pretty: Vec<String> = results.iter().map(|r| r.to_string()).collect();
    pretty.push(format!("{passed}/{} criteria passed", results.len()));
    let outputs = json!({"criteria": results, "all_passed": all_passed});
    let mut report = RunReport::new("selfcheck", "exact", outputs);
    report.seed = Some(args.seed);
    Ok(CommandOutcome {
        report,
        pretty,
        exit: if all_passed { 0 } else { 3 },
    })
}
