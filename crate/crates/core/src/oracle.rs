//! Dense evolution of the full `2^n`-dimensional system.
//!
//! Used as ground truth for the reduced models. Expectations are computed in
//! the eigenbasis of `H`, so there is no integrator error.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::closure::AccessibleSet;
use crate::dense::{commutator, decompose, pauli_matrix, sum_matrix, CMatrix};
use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianSpec;
use crate::pauli::{PauliString, WeightedPauliSum};
use crate::statespace::validate_density;

pub const DEFAULT_DENSE_CAP: usize = 10;
pub const MAX_BCH_ORDER: usize = 20;

/// Dense evaluator with a register-size cap.
#[derive(Clone, Copy, Debug)]
pub struct DenseOracle {
    pub max_qubits: usize,
}

impl Default for DenseOracle {
    fn default() -> Self {
        DenseOracle {
            max_qubits: DEFAULT_DENSE_CAP,
        }
    }
}

/// `H = V diag(d) V†`.
pub struct Eigensystem {
    values: Vec<f64>,
    vectors: CMatrix,
}

impl Eigensystem {
    /// Rotates an operator into the eigenbasis: `V† M V`.
    fn rotate(&self, m: &CMatrix) -> CMatrix {
        self.vectors.adjoint() * m * &self.vectors
    }
}

impl DenseOracle {
    pub fn new(max_qubits: usize) -> Self {
        DenseOracle { max_qubits }
    }

    fn check(&self, n: usize, what: &'static str) -> Result<()> {
        if n > self.max_qubits {
            return Err(Error::CapExceeded {
                what,
                cap: self.max_qubits,
                n_qubits: n,
            });
        }
        Ok(())
    }

    pub fn eigensystem(&self, spec: &HamiltonianSpec) -> Result<Eigensystem> {
        self.check(spec.n_qubits(), "dense evolution")?;
        let eig = SymmetricEigen::new(sum_matrix(spec.terms()));
        Ok(Eigensystem {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        })
    }

    /// `Tr(M U(t) ρ₀ U(t)†)` for each measurement and time, `U = e^{-iHt}`.
    /// Returns one series per measurement.
    pub fn evolve_expectations(
        &self,
        spec: &HamiltonianSpec,
        meas: &[WeightedPauliSum],
        rho0: &CMatrix,
        times: &[f64],
    ) -> Result<Vec<Vec<f64>>> {
        let n = spec.n_qubits();
        self.check(n, "dense evolution")?;
        validate_density(rho0)?;
        if rho0.nrows() != 1 << n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: rho0.nrows().trailing_zeros() as usize,
            });
        }
        let eig = self.eigensystem(spec)?;
        let rho = eig.rotate(rho0);
        let d = eig.values.len();
        meas.iter()
            .map(|m| {
                if m.n_qubits() != n {
                    return Err(Error::DimensionMismatch {
                        left: n,
                        right: m.n_qubits(),
                    });
                }
                let mm = eig.rotate(&sum_matrix(m));
                // Tr(M σ(t)) = Σ_{j,k} M'_{kj} ρ'_{jk} e^{-i(d_j - d_k)t}
                let mut weights = Vec::with_capacity(d * d);
                for j in 0..d {
                    for k in 0..d {
                        let w = mm[(k, j)] * rho[(j, k)];
                        if w.norm() > 0.0 {
                            weights.push((eig.values[j] - eig.values[k], w));
                        }
                    }
                }
                Ok(times
                    .iter()
                    .map(|&t| {
                        weights
                            .iter()
                            .map(|&(omega, w)| w * Complex64::from_polar(1.0, -omega * t))
                            .sum::<Complex64>()
                            .re
                    })
                    .collect())
            })
            .collect()
    }

    pub fn evolve_expectation(
        &self,
        spec: &HamiltonianSpec,
        meas: &WeightedPauliSum,
        rho0: &CMatrix,
        times: &[f64],
    ) -> Result<Vec<f64>> {
        Ok(self
            .evolve_expectations(spec, std::slice::from_ref(meas), rho0, times)?
            .remove(0))
    }

    /// `U(t) = e^{-iHt}`.
    pub fn propagator(&self, spec: &HamiltonianSpec, t: f64) -> Result<CMatrix> {
        let eig = self.eigensystem(spec)?;
        let phases = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            eig.values.len(),
            eig.values
                .iter()
                .map(|&e| Complex64::from_polar(1.0, -e * t)),
        ));
        Ok(&eig.vectors * phases * eig.vectors.adjoint())
    }

    /// Truncated series `Σ_{k ≤ order} (it)^k / k! · ad_H^k(M)`.
    pub fn bch_partial_sum(
        &self,
        spec: &HamiltonianSpec,
        meas: &PauliString,
        order: usize,
        t: f64,
    ) -> Result<CMatrix> {
        self.check(spec.n_qubits(), "Baker-Hausdorff series")?;
        if order > MAX_BCH_ORDER {
            return Err(Error::InvalidInput(format!(
                "order {order} exceeds {MAX_BCH_ORDER}"
            )));
        }
        let h = sum_matrix(spec.terms());
        let mut term = pauli_matrix(meas);
        let mut sum = term.clone();
        let it = Complex64::new(0.0, t);
        for k in 1..=order {
            term = commutator(&h, &term) * (it / k as f64);
            sum += &term;
        }
        Ok(sum)
    }

    /// `ad_H^k(M)` for `k = 1..=depth`.
    pub fn nested_commutators(
        &self,
        spec: &HamiltonianSpec,
        meas: &PauliString,
        depth: usize,
    ) -> Result<Vec<CMatrix>> {
        self.check(spec.n_qubits(), "nested commutators")?;
        let h = sum_matrix(spec.terms());
        let mut cur = pauli_matrix(meas);
        let mut out = Vec::with_capacity(depth);
        for _ in 0..depth {
            cur = commutator(&h, &cur);
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// Decomposes the first `depth` nested commutators of every seed and
    /// returns the strings that are not members of `set`.
    pub fn span_escapes(
        &self,
        spec: &HamiltonianSpec,
        seeds: &[PauliString],
        set: &AccessibleSet,
        depth: usize,
    ) -> Result<Vec<PauliString>> {
        let members = set.member_set();
        let mut escapes = Vec::new();
        for seed in seeds {
            for c in self.nested_commutators(spec, seed, depth)? {
                // ad_H^k of a Hermitian M is Hermitian for even k and
                // anti-Hermitian for odd k; multiply by i to decompose.
                let herm = if crate::dense::hermitian_deviation(&c) <= 1e-9 {
                    c
                } else {
                    c * Complex64::new(0.0, 1.0)
                };
                let scale = herm.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
                let d = decompose(&(herm / Complex64::new(scale, 0.0)))?;
                for s in d.strings() {
                    if !members.contains(s) && !escapes.contains(s) {
                        escapes.push(s.clone());
                    }
                }
            }
        }
        Ok(escapes)
    }
}

/// `‖U†U − I‖_max`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - CMatrix::identity(n, n))
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
}

/// Density matrix of a product state given by Bloch vectors, site 1 leftmost.
pub fn product_density(blochs: &[[f64; 3]]) -> CMatrix {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    blochs
        .iter()
        .fold(DMatrix::from_element(1, 1, c(1.0, 0.0)), |acc, b| {
            let [x, y, z] = *b;
            let site = DMatrix::from_row_slice(
                2,
                2,
                &[
                    c((1.0 + z) / 2.0, 0.0),
                    c(x / 2.0, -y / 2.0),
                    c(x / 2.0, y / 2.0),
                    c((1.0 - z) / 2.0, 0.0),
                ],
            );
            acc.kronecker(&site)
        })
}
