//! Hamiltonians, measurement sets and their Ω decompositions.

use serde::{Deserialize, Serialize};

use crate::dense::{decompose, decompose_sum, sum_matrix};
use crate::error::{Error, Result};
use crate::pauli::{max_site, parse_string, parse_sum, Cell, PauliString, WeightedPauliSum};

/// Schema tag carried by JSON Hamiltonian files.
pub const SPEC_SCHEMA: &str = "pauli-access-spec/1";

/// `H = Σ h_k H_k` with real couplings on Pauli strings.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    terms: WeightedPauliSum,
    labels: Vec<Option<String>>,
}

impl HamiltonianSpec {
    pub fn new(terms: WeightedPauliSum) -> Self {
        let labels = vec![None; terms.len()];
        HamiltonianSpec { terms, labels }
    }

    pub fn with_labels(terms: WeightedPauliSum, labels: Vec<Option<String>>) -> Result<Self> {
        if labels.len() != terms.len() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} terms",
                labels.len(),
                terms.len()
            )));
        }
        Ok(HamiltonianSpec { terms, labels })
    }

    pub fn n_qubits(&self) -> usize {
        self.terms.n_qubits()
    }

    pub fn terms(&self) -> &WeightedPauliSum {
        &self.terms
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    /// The decomposed Hamiltonian set ϝ̄: distinct non-identity strings in
    /// canonical order. Zero couplings still contribute their strings.
    pub fn digamma(&self) -> Vec<PauliString> {
        decomposed_digamma(self)
    }

    pub fn to_json(&self) -> String {
        let doc = SpecDocument {
            schema: SPEC_SCHEMA.to_string(),
            n_qubits: self.n_qubits(),
            terms: self
                .terms
                .terms()
                .iter()
                .zip(&self.labels)
                .map(|((c, s), l)| TermDocument {
                    coeff: *c,
                    string: s.to_string(),
                    label: l.clone(),
                })
                .collect(),
            measurements: Vec::new(),
        };
        serde_json::to_string_pretty(&doc).expect("spec serializes")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TermDocument {
    coeff: f64,
    string: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SpecDocument {
    schema: String,
    n_qubits: usize,
    terms: Vec<TermDocument>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    measurements: Vec<String>,
}

/// A Hamiltonian read from a JSON spec file, plus any measurements it lists.
#[derive(Clone, Debug)]
pub struct SpecFile {
    pub hamiltonian: HamiltonianSpec,
    pub measurements: Option<MeasurementSpec>,
}

/// Reads a `pauli-access-spec/1` document.
pub fn parse_spec_json(text: &str) -> Result<SpecFile> {
    let doc: SpecDocument = serde_json::from_str(text)?;
    if doc.schema != SPEC_SCHEMA {
        return Err(Error::InvalidInput(format!(
            "unsupported schema '{}'",
            doc.schema
        )));
    }
    let mut terms = WeightedPauliSum::new(doc.n_qubits);
    let mut labels = Vec::new();
    for t in doc.terms {
        let s = parse_string(&t.string, doc.n_qubits)?;
        let repeated = terms.strings().any(|x| *x == s);
        terms.add(t.coeff, s)?;
        if !repeated {
            labels.push(t.label);
        }
    }
    let measurements = if doc.measurements.is_empty() {
        None
    } else {
        Some(MeasurementSpec::from_texts(
            &doc.measurements,
            doc.n_qubits,
        )?)
    };
    Ok(SpecFile {
        hamiltonian: HamiltonianSpec::with_labels(terms, labels)?,
        measurements,
    })
}

/// Parses a Hamiltonian in the operator grammar.
pub fn parse_hamiltonian(text: &str, n_qubits: usize) -> Result<HamiltonianSpec> {
    Ok(HamiltonianSpec::new(parse_sum(text, n_qubits)?))
}

/// Exchange chain `H = Σ_k h_k (X_k X_{k+1} + Y_k Y_{k+1})`.
pub fn build_exchange_chain(n_qubits: usize, couplings: &[f64]) -> Result<HamiltonianSpec> {
    if n_qubits < 2 {
        return Err(Error::InvalidInput(
            "an exchange chain needs at least 2 qubits".into(),
        ));
    }
    if couplings.len() != n_qubits - 1 {
        return Err(Error::InvalidInput(format!(
            "{} couplings for a {n_qubits}-qubit chain (expected {})",
            couplings.len(),
            n_qubits - 1
        )));
    }
    let mut terms = WeightedPauliSum::new(n_qubits);
    let mut labels = Vec::new();
    for (k, &h) in couplings.iter().enumerate() {
        for cell in [Cell::X, Cell::Y] {
            terms.add(
                h,
                PauliString::from_sparse(n_qubits, &[(k, cell), (k + 1, cell)])?,
            )?;
            labels.push(Some(format!("h{}", k + 1)));
        }
    }
    HamiltonianSpec::with_labels(terms, labels)
}

/// Distinct non-identity strings of the Hamiltonian, canonical order.
pub fn decomposed_digamma(spec: &HamiltonianSpec) -> Vec<PauliString> {
    let mut out: Vec<PauliString> = spec
        .terms
        .strings()
        .filter(|s| !s.is_identity())
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Raw measurement operators and their decomposed string set M̄.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSpec {
    operators: Vec<WeightedPauliSum>,
    decomposed: Vec<PauliString>,
}

impl MeasurementSpec {
    pub fn new(operators: Vec<WeightedPauliSum>) -> Result<Self> {
        let Some(first) = operators.first() else {
            return Err(Error::InvalidInput("no measurement operators".into()));
        };
        let n = first.n_qubits();
        let mut decomposed: Vec<PauliString> = Vec::new();
        for op in &operators {
            if op.n_qubits() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: op.n_qubits(),
                });
            }
            let d = decompose_sum(op);
            if d.is_empty() {
                return Err(Error::InvalidInput(format!("measurement '{op}' is zero")));
            }
            for s in d.strings() {
                if s.is_identity() {
                    return Err(Error::InvalidInput(format!(
                        "measurement '{op}' has an identity component, which has no dynamics"
                    )));
                }
                if !decomposed.contains(s) {
                    decomposed.push(s.clone());
                }
            }
        }
        Ok(MeasurementSpec {
            operators,
            decomposed,
        })
    }

    /// One string per measurement.
    pub fn from_strings(strings: &[PauliString]) -> Result<Self> {
        let ops = strings
            .iter()
            .map(|s| WeightedPauliSum::from_terms(s.n_qubits(), [(1.0, s.clone())]))
            .collect::<Result<Vec<_>>>()?;
        MeasurementSpec::new(ops)
    }

    pub fn from_texts<S: AsRef<str>>(texts: &[S], n_qubits: usize) -> Result<Self> {
        let ops = texts
            .iter()
            .map(|t| parse_sum(t.as_ref(), n_qubits))
            .collect::<Result<Vec<_>>>()?;
        MeasurementSpec::new(ops)
    }

    /// Measurements separated by `;` or newlines.
    pub fn parse(text: &str, n_qubits: usize) -> Result<Self> {
        let parts: Vec<&str> = split_measurements(text);
        MeasurementSpec::from_texts(&parts, n_qubits)
    }

    pub fn operators(&self) -> &[WeightedPauliSum] {
        &self.operators
    }

    pub fn decomposed(&self) -> &[PauliString] {
        &self.decomposed
    }

    pub fn n_qubits(&self) -> usize {
        self.decomposed[0].n_qubits()
    }
}

pub fn split_measurements(text: &str) -> Vec<&str> {
    text.split([';', '\n'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

/// Largest site index mentioned by a set of grammar texts.
pub fn max_site_of<S: AsRef<str>>(texts: &[S]) -> Result<usize> {
    texts
        .iter()
        .try_fold(0, |m, t| Ok(m.max(max_site(t.as_ref())?)))
}

/// Dense cross-check of [`decomposed_digamma`]: decomposes the summed matrix.
/// Only meaningful when no two terms cancel.
pub fn digamma_from_dense(spec: &HamiltonianSpec) -> Result<Vec<PauliString>> {
    let d = decompose(&sum_matrix(spec.terms()))?;
    let mut out: Vec<PauliString> = d.strings().filter(|s| !s.is_identity()).cloned().collect();
    out.sort();
    Ok(out)
}
