//! Accessible-set generation.
//!
//! [`generate`] closes a seed set under `⌊τ, ν⌉` for ν in the Hamiltonian
//! set, breadth first. [`generate_reference`] is the brute-force trace rule
//! over all of Ω and exists only to validate it on small registers.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::dense::{all_strings, commutator, pauli_matrix, CMatrix};
use crate::error::{Error, Result};
use crate::pauli::{bracket_normalized, parse_string, Cell, PauliString};

/// Largest register [`generate_reference`] accepts by default.
pub const REFERENCE_CAP: usize = 4;

/// How a non-seed member was first reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub parent: usize,
    pub edge: PauliString,
}

/// Contiguous run of members forming one k-finite block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRange {
    pub k: usize,
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessibleSet {
    n_qubits: usize,
    members: Vec<PauliString>,
    provenance: Vec<Option<Provenance>>,
    /// Filled in by [`crate::graph::order_members`].
    pub partition: Vec<BlockRange>,
    pub cores: Vec<usize>,
}

impl AccessibleSet {
    pub fn from_parts(
        n_qubits: usize,
        members: Vec<PauliString>,
        provenance: Vec<Option<Provenance>>,
    ) -> Result<Self> {
        if members.len() != provenance.len() {
            return Err(Error::InvalidInput(
                "provenance length differs from member count".into(),
            ));
        }
        let mut seen = HashSet::with_capacity(members.len());
        for m in &members {
            if m.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch {
                    left: n_qubits,
                    right: m.n_qubits(),
                });
            }
            if !seen.insert(m) {
                return Err(Error::InvalidInput(format!("member {m} listed twice")));
            }
        }
        for p in provenance.iter().flatten() {
            if p.parent >= members.len() {
                return Err(Error::InvalidInput(format!(
                    "provenance parent {} out of range",
                    p.parent
                )));
            }
        }
        Ok(AccessibleSet {
            n_qubits,
            members,
            provenance,
            partition: Vec::new(),
            cores: Vec::new(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn members(&self) -> &[PauliString] {
        &self.members
    }

    pub fn provenance(&self) -> &[Option<Provenance>] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Indices of members without a generating parent.
    pub fn seeds(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.provenance[i].is_none())
            .collect()
    }

    pub fn index_map(&self) -> HashMap<&PauliString, usize> {
        self.members
            .iter()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect()
    }

    pub fn member_set(&self) -> HashSet<PauliString> {
        self.members.iter().cloned().collect()
    }

    pub fn contains(&self, s: &PauliString) -> bool {
        self.members.contains(s)
    }

    /// `true` if no bracket with `digamma` leaves the set.
    pub fn is_fixpoint(&self, digamma: &[PauliString]) -> Result<bool> {
        let set: HashSet<&PauliString> = self.members.iter().collect();
        for m in &self.members {
            for nu in digamma {
                if let Some(r) = bracket_normalized(m, nu)? {
                    if !set.contains(&r) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Reorders members; `order[i]` is the old index of new member `i`.
    /// Provenance parents are remapped; partition and cores are cleared.
    pub fn permuted(&self, order: &[usize]) -> Result<AccessibleSet> {
        if order.len() != self.len() {
            return Err(Error::InvalidInput(
                "permutation length differs from member count".into(),
            ));
        }
        let mut new_index = vec![usize::MAX; self.len()];
        for (new, &old) in order.iter().enumerate() {
            if old >= self.len() || new_index[old] != usize::MAX {
                return Err(Error::InvalidInput("not a permutation".into()));
            }
            new_index[old] = new;
        }
        let members = order.iter().map(|&o| self.members[o].clone()).collect();
        let provenance = order
            .iter()
            .map(|&o| {
                self.provenance[o].as_ref().map(|p| Provenance {
                    parent: new_index[p.parent],
                    edge: p.edge.clone(),
                })
            })
            .collect();
        Ok(AccessibleSet {
            n_qubits: self.n_qubits,
            members,
            provenance,
            partition: Vec::new(),
            cores: Vec::new(),
        })
    }

    pub fn to_document(&self, digamma: Option<&[PauliString]>) -> SetDocument {
        SetDocument {
            n_qubits: self.n_qubits,
            members: self.members.iter().map(|m| m.to_string()).collect(),
            provenance: self
                .provenance
                .iter()
                .map(|p| {
                    p.as_ref().map(|p| ProvenanceDocument {
                        parent: p.parent,
                        edge: p.edge.to_string(),
                    })
                })
                .collect(),
            partition: self.partition.clone(),
            cores: self.cores.clone(),
            digamma: digamma.map(|d| d.iter().map(|s| s.to_string()).collect()),
        }
    }

    pub fn to_json(&self, digamma: Option<&[PauliString]>) -> String {
        serde_json::to_string_pretty(&self.to_document(digamma)).expect("set serializes") + "\n"
    }

    /// One member per line.
    pub fn to_text(&self) -> String {
        self.members.iter().map(|m| format!("{m}\n")).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProvenanceDocument {
    pub parent: usize,
    pub edge: String,
}

/// JSON form of an accessible set. `digamma` is carried along so that a
/// set file is self-contained for graph construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SetDocument {
    pub n_qubits: usize,
    pub members: Vec<String>,
    pub provenance: Vec<Option<ProvenanceDocument>>,
    #[serde(default)]
    pub partition: Vec<BlockRange>,
    #[serde(default)]
    pub cores: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digamma: Option<Vec<String>>,
}

impl SetDocument {
    pub fn into_set(self) -> Result<(AccessibleSet, Option<Vec<PauliString>>)> {
        let n = self.n_qubits;
        let members = self
            .members
            .iter()
            .map(|m| parse_string(m, n))
            .collect::<Result<Vec<_>>>()?;
        let provenance = self
            .provenance
            .into_iter()
            .map(|p| {
                p.map(|p| {
                    Ok(Provenance {
                        parent: p.parent,
                        edge: parse_string(&p.edge, n)?,
                    })
                })
                .transpose()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut set = AccessibleSet::from_parts(n, members, provenance)?;
        let covered: usize = self.partition.iter().map(|b| b.end - b.start).sum();
        if !self.partition.is_empty()
            && (covered != set.len() || self.cores.len() != self.partition.len())
        {
            return Err(Error::InvalidInput(
                "partition does not cover the member list".into(),
            ));
        }
        set.partition = self.partition;
        set.cores = self.cores;
        let digamma = self
            .digamma
            .map(|d| {
                d.iter()
                    .map(|s| parse_string(s, n))
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        Ok((set, digamma))
    }
}

pub fn set_from_json(text: &str) -> Result<(AccessibleSet, Option<Vec<PauliString>>)> {
    serde_json::from_str::<SetDocument>(text)?.into_set()
}

fn common_register(digamma: &[PauliString], seeds: &[PauliString]) -> Result<usize> {
    let n = seeds.first().ok_or(Error::EmptySeeds)?.n_qubits();
    for s in seeds.iter().chain(digamma) {
        if s.n_qubits() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: s.n_qubits(),
            });
        }
    }
    Ok(n)
}

fn canonical_digamma(digamma: &[PauliString]) -> Vec<PauliString> {
    let mut d: Vec<PauliString> = digamma
        .iter()
        .filter(|s| !s.is_identity())
        .cloned()
        .collect();
    d.sort();
    d.dedup();
    d
}

fn omega_size(n_qubits: usize) -> usize {
    if 2 * n_qubits < usize::BITS as usize {
        1 << (2 * n_qubits)
    } else {
        usize::MAX
    }
}

fn expand(member: &PauliString, digamma: &[PauliString]) -> Vec<(PauliString, usize)> {
    digamma
        .iter()
        .enumerate()
        .filter(|(_, nu)| !member.commutes_with(nu))
        .map(|(e, nu)| (member.xor(nu), e))
        .collect()
}

/// Smallest set containing `seeds` that is closed under brackets with
/// `digamma`.
///
/// Breadth first: each frontier member is bracketed with every Hamiltonian
/// string in canonical order, and new strings are appended in (frontier
/// order, Hamiltonian order). The result does not depend on thread count.
pub fn generate(digamma: &[PauliString], seeds: &[PauliString]) -> Result<AccessibleSet> {
    let n = common_register(digamma, seeds)?;
    let digamma = canonical_digamma(digamma);
    let limit = omega_size(n);

    let mut members: Vec<PauliString> = Vec::new();
    let mut provenance: Vec<Option<Provenance>> = Vec::new();
    let mut index: HashSet<PauliString> = HashSet::new();
    for s in seeds {
        if index.insert(s.clone()) {
            members.push(s.clone());
            provenance.push(None);
        }
    }

    let mut frontier: Vec<usize> = (0..members.len()).collect();
    while !frontier.is_empty() {
        #[cfg(feature = "parallel")]
        let candidates: Vec<Vec<(PauliString, usize)>> = {
            use rayon::prelude::*;
            frontier
                .par_iter()
                .map(|&i| expand(&members[i], &digamma))
                .collect()
        };
        #[cfg(not(feature = "parallel"))]
        let candidates: Vec<Vec<(PauliString, usize)>> = frontier
            .iter()
            .map(|&i| expand(&members[i], &digamma))
            .collect();

        let mut next = Vec::new();
        for (&parent, found) in frontier.iter().zip(candidates) {
            for (s, e) in found {
                if !index.contains(&s) {
                    index.insert(s.clone());
                    next.push(members.len());
                    members.push(s);
                    provenance.push(Some(Provenance {
                        parent,
                        edge: digamma[e].clone(),
                    }));
                }
            }
        }
        if members.len() > limit {
            return Err(Error::Inconsistency(format!(
                "closure grew past |Ω| = {limit} members"
            )));
        }
        frontier = next;
    }
    AccessibleSet::from_parts(n, members, provenance)
}

fn frobenius_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| x.conj() * y)
        .sum::<num_complex::Complex64>()
        .norm()
}

/// Brute-force trace rule: adds every `O ∈ Ω` with `Tr(O† [τ, ν]) ≠ 0`.
///
/// Enumerates all `4^n` candidates with dense matrices, so it is capped at
/// `cap` qubits. Members come out in discovery order.
pub fn generate_reference(
    digamma: &[PauliString],
    seeds: &[PauliString],
    cap: usize,
) -> Result<AccessibleSet> {
    let n = common_register(digamma, seeds)?;
    if n > cap {
        return Err(Error::CapExceeded {
            what: "reference generation",
            cap,
            n_qubits: n,
        });
    }
    let omega: Vec<(PauliString, CMatrix)> = all_strings(n)
        .into_iter()
        .map(|p| {
            let m = pauli_matrix(&p);
            (p, m)
        })
        .collect();
    let hamiltonian: Vec<CMatrix> = digamma.iter().map(pauli_matrix).collect();

    let mut members: Vec<PauliString> = Vec::new();
    let mut provenance = Vec::new();
    for s in seeds {
        if !members.contains(s) {
            members.push(s.clone());
            provenance.push(None);
        }
    }
    let mut frontier: Vec<usize> = (0..members.len()).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &t in &frontier {
            let tau = pauli_matrix(&members[t]);
            for (e, nu) in hamiltonian.iter().enumerate() {
                let c = commutator(&tau, nu);
                for (candidate, m) in &omega {
                    if frobenius_inner(m, &c) > 1e-9 && !members.contains(candidate) {
                        next.push(members.len());
                        members.push(candidate.clone());
                        provenance.push(Some(Provenance {
                            parent: t,
                            edge: digamma[e].clone(),
                        }));
                    }
                }
            }
        }
        frontier = next;
    }
    AccessibleSet::from_parts(n, members, provenance)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    fn cell(self) -> Cell {
        match self {
            Axis::X => Cell::X,
            Axis::Y => Cell::Y,
        }
    }

    fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }
}

/// Closed form of the exchange-chain accessible set seeded by
/// `Z_1 ⋯ Z_{m-1} P_m` with `P = X` or `Y` (site `m` is 1-based).
///
/// The set is the full string chain `Z_1 ⋯ Z_{j-1} Q_j`, `j = 1..=N`, where
/// `Q_j` equals `P` when `j - m` is even and the other transverse axis
/// otherwise. Members are ordered by `j`; the seed has no provenance and
/// every other member records its neighbour toward the seed as parent.
pub fn chain_closed_form(n_qubits: usize, m: usize, axis: Axis) -> Result<AccessibleSet> {
    if m == 0 || m > n_qubits {
        return Err(Error::InvalidInput(format!(
            "seed site {m} outside 1..={n_qubits}"
        )));
    }
    let string_at = |j: usize| -> PauliString {
        let mut p = PauliString::identity(n_qubits);
        for site in 0..j - 1 {
            p.set_cell(site, Cell::Z);
        }
        let a = if (j as isize - m as isize) % 2 == 0 {
            axis
        } else {
            axis.other()
        };
        p.set_cell(j - 1, a.cell());
        p
    };
    let members: Vec<PauliString> = (1..=n_qubits).map(string_at).collect();
    let mut provenance = Vec::with_capacity(n_qubits);
    for j in 1..=n_qubits {
        if j == m {
            provenance.push(None);
            continue;
        }
        let parent = if j > m { j - 1 } else { j + 1 };
        let (lo, hi) = (j.min(parent) - 1, j.max(parent) - 1);
        let edge = [Cell::X, Cell::Y]
            .into_iter()
            .map(|c| {
                PauliString::from_sparse(n_qubits, &[(lo, c), (hi, c)]).expect("adjacent sites")
            })
            .find(|nu| {
                bracket_normalized(&members[parent - 1], nu)
                    .ok()
                    .flatten()
                    .as_ref()
                    == Some(&members[j - 1])
            })
            .ok_or_else(|| {
                Error::Inconsistency(format!("no chain edge reaches {}", members[j - 1]))
            })?;
        provenance.push(Some(Provenance {
            parent: parent - 1,
            edge,
        }));
    }
    AccessibleSet::from_parts(n_qubits, members, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::build_exchange_chain;

    fn p(t: &str, n: usize) -> PauliString {
        parse_string(t, n).unwrap()
    }

    fn labels(set: &AccessibleSet) -> Vec<String> {
        set.members().iter().map(|m| m.to_string()).collect()
    }

    fn chain(n: usize) -> Vec<PauliString> {
        build_exchange_chain(n, &vec![1.0; n - 1])
            .unwrap()
            .digamma()
    }

    #[test]
    fn chain_x1_seed() {
        let g = generate(&chain(3), &[p("X1", 3)]).unwrap();
        assert_eq!(labels(&g), ["X1", "Z1 Y2", "Z1 Z2 X3"]);
    }

    #[test]
    fn chain_z1_seed_two_sites() {
        let g = generate(&chain(2), &[p("Z1", 2)]).unwrap();
        let mut got = labels(&g);
        got.sort();
        assert_eq!(got, ["X1 Y2", "Y1 X2", "Z1", "Z2"]);
        assert_eq!(g.seeds(), vec![0]);
        for (i, prov) in g.provenance().iter().enumerate().skip(1) {
            assert!(prov.as_ref().unwrap().parent < i);
        }
    }

    #[test]
    fn fixpoint_seeds_are_returned_unchanged() {
        let d = [p("Z1", 2), p("Z2", 2)];
        let seeds = [p("Z1 Z2", 2), p("Z1", 2)];
        let g = generate(&d, &seeds).unwrap();
        assert_eq!(g.members(), &seeds);
    }

    #[test]
    fn generate_errors() {
        assert!(matches!(generate(&chain(2), &[]), Err(Error::EmptySeeds)));
        assert!(matches!(
            generate(&chain(3), &[p("X1", 2)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reference_agrees_on_small_chain() {
        let fast = generate(&chain(2), &[p("Z1", 2)]).unwrap();
        let slow = generate_reference(&chain(2), &[p("Z1", 2)], REFERENCE_CAP).unwrap();
        assert_eq!(fast.member_set(), slow.member_set());
        let slow = generate_reference(&[], &[p("X1", 1)], REFERENCE_CAP).unwrap();
        assert_eq!(labels(&slow), ["X1"]);
        let fast = generate(&chain(3), &[p("Y1 Z2", 3)]).unwrap();
        let slow = generate_reference(&chain(3), &[p("Y1 Z2", 3)], REFERENCE_CAP).unwrap();
        assert_eq!(fast.member_set(), slow.member_set());
        assert!(matches!(
            generate_reference(&chain(5), &[p("X1", 5)], REFERENCE_CAP),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn closed_form_examples() {
        let g = chain_closed_form(3, 1, Axis::X).unwrap();
        assert_eq!(labels(&g), ["X1", "Z1 Y2", "Z1 Z2 X3"]);
        let g = chain_closed_form(4, 3, Axis::X).unwrap();
        assert_eq!(labels(&g), ["X1", "Z1 Y2", "Z1 Z2 X3", "Z1 Z2 Z3 Y4"]);
        assert_eq!(g.seeds(), vec![2]);
        assert!(chain_closed_form(3, 0, Axis::Y).is_err());
        assert!(chain_closed_form(3, 4, Axis::Y).is_err());
    }

    #[test]
    fn closed_form_single_site() {
        let g = chain_closed_form(1, 1, Axis::Y).unwrap();
        assert_eq!(labels(&g), ["Y1"]);
    }

    #[test]
    fn json_round_trip_keeps_everything() {
        let d = chain(3);
        let g = generate(&d, &[p("Y1 Z2", 3)]).unwrap();
        let (back, dig) = set_from_json(&g.to_json(Some(&d))).unwrap();
        assert_eq!(back, g);
        assert_eq!(dig.unwrap(), d);
    }

    #[test]
    fn fixpoint_check() {
        let d = chain(3);
        let g = generate(&d, &[p("Z1", 3)]).unwrap();
        assert!(g.is_fixpoint(&d).unwrap());
        let partial = AccessibleSet::from_parts(3, vec![p("Z1", 3)], vec![None]).unwrap();
        assert!(!partial.is_fixpoint(&d).unwrap());
    }
}
