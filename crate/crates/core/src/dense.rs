//! Dense `2^n × 2^n` representations of Pauli strings and sums.
//!
//! Site 1 is the leftmost tensor factor, so it maps to the most significant
//! bit of a basis-state index.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Cell, PauliString, WeightedPauliSum};

pub type CMatrix = DMatrix<Complex64>;

/// Coefficients smaller than this are dropped by [`decompose`].
pub const DECOMPOSE_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// The 2×2 matrix of a single cell.
pub fn cell_matrix(cell: Cell) -> CMatrix {
    let entries = match cell {
        Cell::I => [ONE, ZERO, ZERO, ONE],
        Cell::X => [ZERO, ONE, ONE, ZERO],
        Cell::Y => [ZERO, -I, I, ZERO],
        Cell::Z => [ONE, ZERO, ZERO, -ONE],
    };
    DMatrix::from_row_slice(2, 2, &entries)
}

/// Kronecker product of the cell matrices, site 1 leftmost.
pub fn pauli_matrix(p: &PauliString) -> CMatrix {
    p.cells().fold(DMatrix::from_element(1, 1, ONE), |acc, c| {
        acc.kronecker(&cell_matrix(c))
    })
}

pub fn sum_matrix(sum: &WeightedPauliSum) -> CMatrix {
    let dim = 1usize << sum.n_qubits();
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for (c, s) in sum.terms() {
        apply_scaled_add(&mut m, s, Complex64::new(*c, 0.0));
    }
    m
}

/// Bit masks of a string in basis-index convention.
fn index_masks(p: &PauliString) -> (usize, usize, u32) {
    let n = p.n_qubits();
    let (mut x, mut z, mut y) = (0usize, 0usize, 0u32);
    for (site, cell) in p.support() {
        let bit = 1usize << (n - 1 - site);
        match cell {
            Cell::X => x |= bit,
            Cell::Z => z |= bit,
            Cell::Y => {
                x |= bit;
                z |= bit;
                y += 1;
            }
            Cell::I => {}
        }
    }
    (x, z, y)
}

fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// `P|c⟩ = i^{#Y} (-1)^{|c ∧ z|} |c ⊕ x⟩`.
fn apply_scaled_add(m: &mut CMatrix, p: &PauliString, scale: Complex64) {
    let (x, z, y) = index_masks(p);
    let base = i_pow(y) * scale;
    for col in 0..m.ncols() {
        let sign = if (col & z).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        m[(col ^ x, col)] += base * sign;
    }
}

/// `Tr(P · M)` in `O(2^n)` using the single nonzero per column of `P`.
pub fn trace_with(p: &PauliString, m: &CMatrix) -> Complex64 {
    let (x, z, y) = index_masks(p);
    let base = i_pow(y);
    let mut acc = ZERO;
    for col in 0..m.ncols() {
        let sign = if (col & z).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        // P[col^x, col] * M[col, col^x]
        acc += m[(col, col ^ x)] * sign;
    }
    acc * base
}

pub fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..m.nrows() {
        for c in r..m.ncols() {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Every string of Ω on `n` sites, in canonical order.
pub fn all_strings(n_qubits: usize) -> Vec<PauliString> {
    let count = 1usize << (2 * n_qubits);
    let mut out: Vec<PauliString> = (0..count)
        .map(|mut code| {
            let mut p = PauliString::identity(n_qubits);
            for site in (0..n_qubits).rev() {
                p.set_cell(site, Cell::ALL[code & 3]);
                code >>= 2;
            }
            p
        })
        .collect();
    out.sort();
    out
}

/// Expands a Hermitian matrix in Ω: `c_P = Tr(P M) / 2^n`.
///
/// Terms come out in canonical string order; `|c_P| < 1e-10` is dropped.
pub fn decompose(m: &CMatrix) -> Result<WeightedPauliSum> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidInput(format!(
            "{}×{} matrix is not square",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = qubits_for_dim(m.nrows())?;
    let scale = m.nrows() as f64;
    let tol_h = 1e-10 * (1.0 + m.iter().map(|v| v.norm()).fold(0.0, f64::max));
    let dev = hermitian_deviation(m);
    if dev > tol_h {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let mut out = WeightedPauliSum::new(n);
    for p in all_strings(n) {
        let c = trace_with(&p, m) / scale;
        if c.re.abs() >= DECOMPOSE_TOL {
            out.add(c.re, p)?;
        }
    }
    Ok(out)
}

/// A sum is already an Ω expansion; decomposition only merges and prunes.
pub fn decompose_sum(sum: &WeightedPauliSum) -> WeightedPauliSum {
    let mut terms: Vec<_> = sum.clone().prune(DECOMPOSE_TOL).terms().to_vec();
    terms.sort_by(|a, b| a.1.cmp(&b.1));
    WeightedPauliSum::from_terms(sum.n_qubits(), terms).expect("terms share the register")
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
}
