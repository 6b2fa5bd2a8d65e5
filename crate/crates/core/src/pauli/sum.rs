use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::PauliString;
use crate::error::{Error, Result};

/// Real linear combination of distinct Pauli strings on a common register.
///
/// Terms keep insertion order. Adding a string that is already present
/// merges the coefficients. Zero coefficients survive until [`prune`] is
/// called, because a Hamiltonian term with zero coupling still contributes
/// its structure.
///
/// [`prune`]: WeightedPauliSum::prune
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedPauliSum {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl WeightedPauliSum {
    pub fn new(n_qubits: usize) -> Self {
        WeightedPauliSum {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(
        n_qubits: usize,
        terms: impl IntoIterator<Item = (f64, PauliString)>,
    ) -> Result<Self> {
        let mut sum = WeightedPauliSum::new(n_qubits);
        for (c, s) in terms {
            sum.add(c, s)?;
        }
        Ok(sum)
    }

    pub fn add(&mut self, coefficient: f64, string: PauliString) -> Result<()> {
        if string.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: string.n_qubits(),
            });
        }
        if !coefficient.is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-finite coefficient on {string}"
            )));
        }
        match self.terms.iter_mut().find(|(_, s)| *s == string) {
            Some((c, _)) => *c += coefficient,
            None => self.terms.push((coefficient, string)),
        }
        Ok(())
    }

    /// Drops terms with `|c| < tol`.
    pub fn prune(mut self, tol: f64) -> Self {
        self.terms.retain(|(c, _)| c.abs() >= tol);
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn strings(&self) -> impl Iterator<Item = &PauliString> {
        self.terms.iter().map(|(_, s)| s)
    }

    pub fn coefficient_of(&self, string: &PauliString) -> f64 {
        self.terms
            .iter()
            .find(|(_, s)| s == string)
            .map_or(0.0, |(c, _)| *c)
    }

    /// Coefficient lookup keyed by string.
    pub fn as_map(&self) -> HashMap<&PauliString, f64> {
        self.terms.iter().map(|(c, s)| (s, *c)).collect()
    }

    /// Same sum on a wider or narrower register.
    pub fn resized(&self, n_qubits: usize) -> Result<Self> {
        Ok(WeightedPauliSum {
            n_qubits,
            terms: self
                .terms
                .iter()
                .map(|(c, s)| Ok((*c, s.resized(n_qubits)?)))
                .collect::<Result<_>>()?,
        })
    }
}

impl fmt::Display for WeightedPauliSum {
    /// Grammar form with explicit coefficients; `{}` on `f64` round-trips.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, s)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_sign_negative() {
                ("-", -c)
            } else {
                ("+", *c)
            };
            match (i, sign) {
                (0, "+") => write!(f, "{mag} * {s}")?,
                (0, _) => write!(f, "-{mag} * {s}")?,
                _ => write!(f, " {sign} {mag} * {s}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_sum;
    use proptest::prelude::*;

    #[test]
    fn duplicates_merge() {
        let s = parse_sum("X1 X2 + X1 X2", 2).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.terms()[0].0, 2.0);
    }

    #[test]
    fn prune_drops_small() {
        let s = parse_sum("0 * X1 + 1e-12 * Z1 + Y1", 1)
            .unwrap()
            .prune(1e-10);
        assert_eq!(s.len(), 1);
    }

    fn arb_sum() -> impl Strategy<Value = (usize, Vec<(f64, Vec<u8>)>)> {
        (1usize..5).prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((-10.0f64..10.0, prop::collection::vec(0u8..4, n)), 1..6),
            )
        })
    }

    proptest! {
        #[test]
        fn display_round_trips((n, raw) in arb_sum()) {
            let mut sum = WeightedPauliSum::new(n);
            for (c, cells) in raw {
                let cells: Vec<_> = cells.iter().map(|&k| crate::pauli::Cell::ALL[k as usize]).collect();
                sum.add(c, PauliString::from_cells(&cells)).unwrap();
            }
            let text = sum.to_string();
            let back = parse_sum(&text, n).unwrap();
            prop_assert_eq!(back, sum);
        }
    }
}
