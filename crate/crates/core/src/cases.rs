//! The six single-string measurement cases on the exchange chain.

use std::fmt;

use crate::error::{Error, Result};
use crate::pauli::{parse_string, PauliString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasurementCase {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl MeasurementCase {
    pub const ALL: [MeasurementCase; 6] = [
        MeasurementCase::A,
        MeasurementCase::B,
        MeasurementCase::C,
        MeasurementCase::D,
        MeasurementCase::E,
        MeasurementCase::F,
    ];

    pub fn letter(self) -> char {
        match self {
            MeasurementCase::A => 'a',
            MeasurementCase::B => 'b',
            MeasurementCase::C => 'c',
            MeasurementCase::D => 'd',
            MeasurementCase::E => 'e',
            MeasurementCase::F => 'f',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.letter() == c.to_ascii_lowercase())
    }

    pub fn seed_text(self) -> &'static str {
        match self {
            MeasurementCase::A => "X1",
            MeasurementCase::B => "Z1",
            MeasurementCase::C => "Z1 Y2",
            MeasurementCase::D => "Y1 Z2",
            MeasurementCase::E => "Z1 Z2 X3",
            MeasurementCase::F => "X1 Y2 Z3",
        }
    }

    /// Fewest sites on which the seed fits.
    pub fn min_qubits(self) -> usize {
        match self {
            MeasurementCase::A | MeasurementCase::B => 1,
            MeasurementCase::C | MeasurementCase::D => 2,
            MeasurementCase::E | MeasurementCase::F => 3,
        }
    }

    /// The seed on an `n`-site register; `None` when it does not fit.
    pub fn seed(self, n_qubits: usize) -> Option<PauliString> {
        (n_qubits >= self.min_qubits())
            .then(|| parse_string(self.seed_text(), n_qubits).expect("seed texts are valid"))
    }

    pub fn seed_checked(self, n_qubits: usize) -> Result<PauliString> {
        self.seed(n_qubits).ok_or_else(|| {
            Error::InvalidInput(format!(
                "case ({}) needs at least {} qubits",
                self.letter(),
                self.min_qubits()
            ))
        })
    }

    /// Accessible-set size on the uniform `n`-site chain (`n ≥ 2`).
    pub fn expected_size(self, n: usize) -> usize {
        match self {
            MeasurementCase::A | MeasurementCase::C | MeasurementCase::E => n,
            MeasurementCase::B => n * n,
            MeasurementCase::D => (n * n * n - n * n) / 2,
            MeasurementCase::F => (n * (n - 1) / 2).pow(2),
        }
    }
}

impl fmt::Display for MeasurementCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.letter(), self.seed_text())
    }
}

/// Size of block `k` for the `Y₁Z₂` seed.
pub fn case_d_block_size(k: usize) -> usize {
    (3 * k - 2) * (k - 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::generate;
    use crate::hamiltonian::build_exchange_chain;

    #[test]
    fn sizes_on_small_chains() {
        for n in 3..=6 {
            let d = build_exchange_chain(n, &vec![1.0; n - 1])
                .unwrap()
                .digamma();
            for case in MeasurementCase::ALL {
                let set = generate(&d, &[case.seed(n).unwrap()]).unwrap();
                assert_eq!(set.len(), case.expected_size(n), "{case} n={n}");
            }
        }
    }

    #[test]
    fn seeds_respect_register() {
        assert!(MeasurementCase::F.seed(2).is_none());
        assert_eq!(MeasurementCase::D.seed(2).unwrap().to_string(), "Y1 Z2");
        assert_eq!(MeasurementCase::from_letter('E'), Some(MeasurementCase::E));
        assert_eq!(case_d_block_size(5), 26);
    }
}
