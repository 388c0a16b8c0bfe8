//! On-disk document formats: functionals (finite or moment tables) and
//! ideal generator lists, with scalar-mode-aware loading.
//!
//! Scalar values appear in one of two encodings:
//!
//! * exact: `{"re": "3/2", "im": "-1/4"}` — rational strings;
//! * float: `{"re": 1.5, "im": -0.25, "precision": 128}`.
//!
//! Exact documents can be loaded in float mode (values are converted at
//! the requested precision); float documents cannot be loaded in exact
//! mode.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use frobsym::functional::{FiniteFunctional, MomentFunctional};
use frobsym::polynomial::{Monomial, Polynomial};
use frobsym::reconstruct::lift_polynomial;
use frobsym::{BigComplex, GaussianRational};

use crate::parse::parse_polynomial;
use crate::{CliError, ScalarMode};

type Q = GaussianRational;
type C = BigComplex;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalDocument {
    pub kind: String,
    #[serde(default)]
    pub finite: Option<FiniteDoc>,
    #[serde(default)]
    pub moments: Option<MomentsDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteDoc {
    pub labels: Vec<String>,
    pub values: Vec<serde_json::Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsDoc {
    pub num_vars: usize,
    pub degree_bound: u32,
    pub entries: Vec<MomentEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentEntry {
    pub exponents: Vec<u32>,
    pub value: serde_json::Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealDocument {
    pub num_vars: usize,
    pub generators: Vec<String>,
}

/// A functional parsed into one concrete algebra and scalar type.
pub enum LoadedFunctional {
    ExactFinite(FiniteFunctional<Q>),
    ExactMoments(MomentFunctional<Q>),
    FloatFinite(FiniteFunctional<C>),
    FloatMoments(MomentFunctional<C>),
}

impl LoadedFunctional {
    pub fn mode(&self) -> ScalarMode {
        match self {
            LoadedFunctional::ExactFinite(_) | LoadedFunctional::ExactMoments(_) => {
                ScalarMode::Exact
            }
            LoadedFunctional::FloatFinite(_) | LoadedFunctional::FloatMoments(_) => {
                ScalarMode::Float
            }
        }
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))
}

/// `sha256:<hex>` over the raw file bytes.
pub fn digest_bytes(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("sha256:{:x}", hasher.finalize())
}

fn scalar_to_exact(value: &serde_json::Value, context: &str) -> Result<Q, CliError> {
    serde_json::from_value::<Q>(value.clone()).map_err(|e| {
        if serde_json::from_value::<C>(value.clone()).is_ok() {
            CliError::validation(format!(
                "{context}: float-encoded scalar cannot be used in exact mode"
            ))
        } else {
            CliError::validation(format!("{context}: {e}"))
        }
    })
}

fn scalar_to_float(
    value: &serde_json::Value,
    precision: u32,
    context: &str,
) -> Result<C, CliError> {
    if let Ok(float) = serde_json::from_value::<C>(value.clone()) {
        return Ok(float);
    }
    serde_json::from_value::<Q>(value.clone())
        .map(|exact| C::from_exact(&exact, precision))
        .map_err(|e| CliError::validation(format!("{context}: {e}")))
}

/// Loads and validates a functional document, returning the functional and
/// the file digest. `degree_cap` restricts a moment table to a lower
/// degree bound before use.
pub fn load_functional(
    path: &Path,
    mode: ScalarMode,
    precision: u32,
    degree_cap: Option<u32>,
) -> Result<(LoadedFunctional, String), CliError> {
    let bytes = read_bytes(path)?;
    let digest = digest_bytes(&bytes);
    let doc: FunctionalDocument = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    let loaded = match (doc.kind.as_str(), doc.finite, doc.moments) {
        ("finite", Some(finite), None) => {
            if degree_cap.is_some() {
                return Err(CliError::validation(
                    "--degree-bound applies only to moment documents",
                ));
            }
            build_finite(finite, mode, precision)?
        }
        ("moments", None, Some(moments)) => build_moments(moments, mode, precision, degree_cap)?,
        ("finite", _, _) => {
            return Err(CliError::validation(
                "kind \"finite\" requires exactly the `finite` section",
            ));
        }
        ("moments", _, _) => {
            return Err(CliError::validation(
                "kind \"moments\" requires exactly the `moments` section",
            ));
        }
        (other, _, _) => {
            return Err(CliError::validation(format!(
                "unknown document kind {other:?}; expected \"finite\" or \"moments\""
            )));
        }
    };
    Ok((loaded, digest))
}

fn build_finite(
    doc: FiniteDoc,
    mode: ScalarMode,
    precision: u32,
) -> Result<LoadedFunctional, CliError> {
    match mode {
        ScalarMode::Exact => {
            let values = doc
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| scalar_to_exact(v, &format!("values[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            FiniteFunctional::new(doc.labels, values)
                .map(LoadedFunctional::ExactFinite)
                .map_err(CliError::from)
        }
        ScalarMode::Float => {
            let values = doc
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| scalar_to_float(v, precision, &format!("values[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            FiniteFunctional::new(doc.labels, values)
                .map(LoadedFunctional::FloatFinite)
                .map_err(CliError::from)
        }
    }
}

fn build_moments(
    doc: MomentsDoc,
    mode: ScalarMode,
    precision: u32,
    degree_cap: Option<u32>,
) -> Result<LoadedFunctional, CliError> {
    let bound = match degree_cap {
        Some(cap) if cap > doc.degree_bound => {
            return Err(CliError::validation(format!(
                "--degree-bound {cap} exceeds the document's bound {}",
                doc.degree_bound
            )));
        }
        Some(cap) => cap,
        None => doc.degree_bound,
    };
    let mut keyed: Vec<(Monomial, &serde_json::Value)> = Vec::new();
    for (i, entry) in doc.entries.iter().enumerate() {
        if entry.exponents.len() != doc.num_vars {
            return Err(CliError::validation(format!(
                "entries[{i}]: exponent vector has {} entries, document has {} variables",
                entry.exponents.len(),
                doc.num_vars
            )));
        }
        let monomial = Monomial::new(entry.exponents.clone());
        if monomial.degree() > bound {
            if monomial.degree() > doc.degree_bound {
                return Err(CliError::validation(format!(
                    "entries[{i}]: degree {} exceeds the bound {}",
                    monomial.degree(),
                    doc.degree_bound
                )));
            }
            continue; // above the cap, below the document bound: dropped
        }
        keyed.push((monomial, &entry.value));
    }
    match mode {
        ScalarMode::Exact => {
            let mut moments = BTreeMap::new();
            for (monomial, value) in keyed {
                let context = format!("moment {monomial}");
                if moments
                    .insert(monomial, scalar_to_exact(value, &context)?)
                    .is_some()
                {
                    return Err(CliError::validation(format!("duplicate {context}")));
                }
            }
            MomentFunctional::new(doc.num_vars, bound, moments)
                .map(LoadedFunctional::ExactMoments)
                .map_err(CliError::from)
        }
        ScalarMode::Float => {
            let mut moments = BTreeMap::new();
            for (monomial, value) in keyed {
                let context = format!("moment {monomial}");
                if moments
                    .insert(monomial, scalar_to_float(value, precision, &context)?)
                    .is_some()
                {
                    return Err(CliError::validation(format!("duplicate {context}")));
                }
            }
            MomentFunctional::new(doc.num_vars, bound, moments)
                .map(LoadedFunctional::FloatMoments)
                .map_err(CliError::from)
        }
    }
}

/// Loads an ideal document and parses its generators, checking the
/// variable count against the functional's.
pub fn load_ideal(
    path: &Path,
    expected_vars: usize,
) -> Result<(Vec<Polynomial<Q>>, String), CliError> {
    let bytes = read_bytes(path)?;
    let digest = digest_bytes(&bytes);
    let doc: IdealDocument = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    if doc.num_vars != expected_vars {
        return Err(CliError::validation(format!(
            "ideal has {} variables, functional has {expected_vars}",
            doc.num_vars
        )));
    }
    let generators = doc
        .generators
        .iter()
        .enumerate()
        .map(|(i, text)| {
            parse_polynomial(text, doc.num_vars)
                .map_err(|e| CliError::validation(format!("generators[{i}]: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((generators, digest))
}

/// Ideal generators converted to float coefficients.
pub fn lift_ideal(generators: &[Polynomial<Q>], precision: u32) -> Vec<Polynomial<C>> {
    generators
        .iter()
        .map(|g| lift_polynomial(g, precision))
        .collect()
}
