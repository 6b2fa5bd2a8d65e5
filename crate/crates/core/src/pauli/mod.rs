//! Phase-free Pauli strings and their exact product/commutator algebra.
//!
//! A [`PauliString`] is an element of Ω: a tensor product of single-site
//! cells `I`, `X`, `Y`, `Z` with no coefficient. Site `j` is stored as a pair
//! of bits `(x_j, z_j)` with `X = (1,0)`, `Z = (0,1)` and `Y = (1,1)`.
//! Coefficients and phases only ever appear in the results of
//! [`multiply`] and [`bracket`].

mod grammar;
pub mod identities;
mod sum;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use grammar::{max_site, parse_string, parse_sum};
pub use sum::WeightedPauliSum;

type Words = SmallVec<[u64; 1]>;

/// Single-site operator. The declaration order is the canonical cell order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    I,
    X,
    Y,
    Z,
}

impl Cell {
    pub const ALL: [Cell; 4] = [Cell::I, Cell::X, Cell::Y, Cell::Z];

    fn from_bits(x: bool, z: bool) -> Cell {
        match (x, z) {
            (false, false) => Cell::I,
            (true, false) => Cell::X,
            (true, true) => Cell::Y,
            (false, true) => Cell::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Cell::I => (false, false),
            Cell::X => (true, false),
            Cell::Y => (true, true),
            Cell::Z => (false, true),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Cell::I => 'I',
            Cell::X => 'X',
            Cell::Y => 'Y',
            Cell::Z => 'Z',
        }
    }
}

/// Tensor product of cells over `n_qubits` sites, without phase.
///
/// Sites are 0-based internally; the text form uses 1-based indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: Words,
    z: Words,
}

fn word_count(n_qubits: usize) -> usize {
    n_qubits.div_ceil(64).max(1)
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        let words = word_count(n_qubits);
        PauliString {
            n_qubits,
            x: SmallVec::from_elem(0, words),
            z: SmallVec::from_elem(0, words),
        }
    }

    /// Builds a string from `(site, cell)` pairs with 0-based sites.
    pub fn from_sparse(n_qubits: usize, cells: &[(usize, Cell)]) -> Result<Self> {
        let mut p = PauliString::identity(n_qubits);
        let mut seen = vec![false; n_qubits];
        for &(site, cell) in cells {
            if site >= n_qubits {
                return Err(Error::SiteOutOfRange {
                    site: site + 1,
                    n_qubits,
                });
            }
            if seen[site] {
                return Err(Error::DuplicateSite { site: site + 1 });
            }
            seen[site] = true;
            p.set_cell(site, cell);
        }
        Ok(p)
    }

    pub fn from_cells(cells: &[Cell]) -> Self {
        let mut p = PauliString::identity(cells.len());
        for (site, &c) in cells.iter().enumerate() {
            p.set_cell(site, c);
        }
        p
    }

    /// Single non-identity cell at 0-based `site`.
    pub fn single(n_qubits: usize, site: usize, cell: Cell) -> Self {
        let mut p = PauliString::identity(n_qubits);
        p.set_cell(site, cell);
        p
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn cell(&self, site: usize) -> Cell {
        assert!(site < self.n_qubits, "site {site} out of range");
        let (w, b) = (site / 64, site % 64);
        Cell::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn set_cell(&mut self, site: usize, cell: Cell) {
        assert!(site < self.n_qubits, "site {site} out of range");
        let (w, b) = (site / 64, site % 64);
        let (xb, zb) = cell.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.n_qubits).map(|s| self.cell(s))
    }

    /// Non-identity sites with their cells, ascending.
    pub fn support(&self) -> impl Iterator<Item = (usize, Cell)> + '_ {
        self.cells().enumerate().filter(|(_, c)| *c != Cell::I)
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(self.z.iter()).all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// Highest 0-based site carrying a non-identity cell.
    pub fn highest_site(&self) -> Option<usize> {
        for w in (0..self.x.len()).rev() {
            let occupied = self.x[w] | self.z[w];
            if occupied != 0 {
                return Some(w * 64 + 63 - occupied.leading_zeros() as usize);
            }
        }
        None
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let odd = self
            .x
            .iter()
            .zip(&self.z)
            .zip(other.x.iter().zip(&other.z))
            .map(|((x1, z1), (x2, z2))| ((x1 & z2) ^ (z1 & x2)).count_ones())
            .sum::<u32>();
        odd % 2 == 0
    }

    /// Same cells on a register of `n_qubits` sites. Growing pads with
    /// identity; shrinking fails if a dropped site is occupied.
    pub fn resized(&self, n_qubits: usize) -> Result<Self> {
        if let Some(h) = self.highest_site() {
            if h >= n_qubits {
                return Err(Error::SiteOutOfRange {
                    site: h + 1,
                    n_qubits,
                });
            }
        }
        let words = word_count(n_qubits);
        let mut x = self.x.clone();
        let mut z = self.z.clone();
        x.resize(words, 0);
        z.resize(words, 0);
        Ok(PauliString { n_qubits, x, z })
    }

    /// Phase-free product, i.e. the Ω element proportional to `self · other`.
    pub fn xor(&self, other: &PauliString) -> PauliString {
        PauliString {
            n_qubits: self.n_qubits,
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
        }
    }

    fn y_count(&self) -> u32 {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x & z).count_ones())
            .sum()
    }

    /// Text form in the operator grammar, e.g. `Z1 Z2 X3`; identity is `I`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

fn check_dims(a: &PauliString, b: &PauliString) -> Result<()> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::DimensionMismatch {
            left: a.n_qubits,
            right: b.n_qubits,
        });
    }
    Ok(())
}

impl Ord for PauliString {
    /// Lexicographic over sites 1, 2, ... with `I < X < Y < Z` per site;
    /// shorter registers sort first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n_qubits.cmp(&other.n_qubits).then_with(|| {
            for w in 0..self.x.len() {
                let diff = (self.x[w] ^ other.x[w]) | (self.z[w] ^ other.z[w]);
                if diff != 0 {
                    let site = w * 64 + diff.trailing_zeros() as usize;
                    return self.cell(site).cmp(&other.cell(site));
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (site, cell) in self.support() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}{}", cell.symbol(), site + 1)?;
        }
        if first {
            f.write_str("I")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({}; n={})", self, self.n_qubits)
    }
}

/// `i^phase · string`, the exact value of a product of two Pauli strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhasedString {
    /// Exponent of `i`, always in `0..4`.
    pub phase: u8,
    pub string: PauliString,
}

/// Exact product `a · b = i^φ · r`.
///
/// Each string is `i^{|x∧z|} X^x Z^z`; moving `Z^{z_a}` past `X^{x_b}`
/// costs `(-1)^{|z_a ∧ x_b|}`.
pub fn multiply(a: &PauliString, b: &PauliString) -> Result<PhasedString> {
    check_dims(a, b)?;
    let string = a.xor(b);
    let swaps: u32 =
        a.z.iter()
            .zip(&b.x)
            .map(|(z, x)| (z & x).count_ones())
            .sum();
    let phase =
        (a.y_count() + b.y_count() + 2 * swaps + 4 * a.n_qubits as u32 - string.y_count()) % 4;
    Ok(PhasedString {
        phase: phase as u8,
        string,
    })
}

/// Nonzero commutator `[a, b] = i · coefficient · string`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bracket {
    pub coefficient: f64,
    pub string: PauliString,
}

/// Commutator of two Pauli strings, `None` when they commute.
///
/// Anticommuting strings give `[a,b] = 2ab`, and `ab` is anti-Hermitian, so
/// the coefficient is always `±2`.
pub fn bracket(a: &PauliString, b: &PauliString) -> Result<Option<Bracket>> {
    check_dims(a, b)?;
    if a.commutes_with(b) {
        return Ok(None);
    }
    let product = multiply(a, b)?;
    let coefficient = match product.phase {
        1 => 2.0,
        3 => -2.0,
        p => {
            return Err(Error::Inconsistency(format!(
                "anticommuting product {a} · {b} has real phase i^{p}"
            )))
        }
    };
    Ok(Some(Bracket {
        coefficient,
        string: product.string,
    }))
}

/// The Ω element proportional to `[a, b]`, or `None` if they commute.
pub fn bracket_normalized(a: &PauliString, b: &PauliString) -> Result<Option<PauliString>> {
    check_dims(a, b)?;
    Ok((!a.commutes_with(b)).then(|| a.xor(b)))
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Strings deserialize from their text form; the register size is not part
/// of the text, so callers resize with [`PauliString::resized`] after
/// loading. The deserialized register is just wide enough for the text.
impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        grammar::parse_string_min(&text).map_err(serde::de::Error::custom)
    }
}
