//! Reduced linear model over the expectation values of an ordered
//! accessible set.
//!
//! With `x_k = Tr(O_k ρ)` the Heisenberg equation `dO/dt = i[H, O]` closes on
//! the set, giving `ẋ = A x` and `y = C x`. `A` is real and antisymmetric:
//! each `[H_m, O_j] = i c O_l` with `c = ±2`, so `A[j][l] = -h_m c`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::closure::AccessibleSet;
use crate::dense::{decompose_sum, hermitian_deviation, qubits_for_dim, trace_with, CMatrix};
use crate::error::{Error, Result};
use crate::hamiltonian::{HamiltonianSpec, MeasurementSpec};
use crate::pauli::{bracket, parse_string, Cell, PauliString};

/// Largest state dimension for which the matrix-exponential integrator runs.
pub const EXPONENTIAL_CAP: usize = 2000;

/// Sparse entry `(row, col, value)`.
pub type Triplet = (usize, usize, f64);

#[derive(Clone, Debug, PartialEq)]
pub struct StateSpaceModel {
    ordering: Vec<PauliString>,
    a: Vec<Triplet>,
    b: Vec<Triplet>,
    c: Vec<Triplet>,
    n_outputs: usize,
    /// Hamiltonian term indices contributing to each entry of `a`.
    coupling_provenance: Vec<Vec<usize>>,
}

/// Column, value and the Hamiltonian terms that produced it.
type RowEntry = (usize, f64, Vec<usize>);

fn row_of(
    j: usize,
    member: &PauliString,
    spec: &HamiltonianSpec,
    index: &HashMap<&PauliString, usize>,
) -> Result<Vec<RowEntry>> {
    let mut row: BTreeMap<usize, (f64, Vec<usize>)> = BTreeMap::new();
    for (m, (h, term)) in spec.terms().terms().iter().enumerate() {
        let Some(br) = bracket(term, member)? else {
            continue;
        };
        let Some(&l) = index.get(&br.string) else {
            return Err(Error::Inconsistency(format!(
                "[{term}, {member}] ∝ {} is outside the set (row {j})",
                br.string
            )));
        };
        let entry = row.entry(l).or_insert((0.0, Vec::new()));
        entry.0 += -h * br.coefficient;
        entry.1.push(m);
    }
    Ok(row
        .into_iter()
        .filter(|(_, (v, _))| *v != 0.0)
        .map(|(l, (v, p))| (l, v, p))
        .collect())
}

/// Builds `A`, `B = 0` and `C` for an ordered set.
pub fn build_model(
    set: &AccessibleSet,
    spec: &HamiltonianSpec,
    meas: &MeasurementSpec,
) -> Result<StateSpaceModel> {
    if spec.n_qubits() != set.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: set.n_qubits(),
            right: spec.n_qubits(),
        });
    }
    if meas.n_qubits() != set.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: set.n_qubits(),
            right: meas.n_qubits(),
        });
    }
    let index = set.index_map();
    let members = set.members();

    #[cfg(feature = "parallel")]
    let rows: Vec<Result<Vec<RowEntry>>> = {
        use rayon::prelude::*;
        members
            .par_iter()
            .enumerate()
            .map(|(j, m)| row_of(j, m, spec, &index))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Result<Vec<RowEntry>>> = members
        .iter()
        .enumerate()
        .map(|(j, m)| row_of(j, m, spec, &index))
        .collect();

    let mut a = Vec::new();
    let mut coupling_provenance = Vec::new();
    for (j, row) in rows.into_iter().enumerate() {
        for (l, v, p) in row? {
            a.push((j, l, v));
            coupling_provenance.push(p);
        }
    }

    let mut c = Vec::new();
    for (r, op) in meas.operators().iter().enumerate() {
        let mut row: Vec<Triplet> = Vec::new();
        for (coef, s) in decompose_sum(op).terms() {
            let &col = index.get(s).ok_or_else(|| {
                Error::Inconsistency(format!("measurement string {s} is not in the set"))
            })?;
            row.push((r, col, *coef));
        }
        row.sort_by_key(|t| t.1);
        c.extend(row);
    }
    Ok(StateSpaceModel {
        ordering: members.to_vec(),
        a,
        b: Vec::new(),
        c,
        n_outputs: meas.operators().len(),
        coupling_provenance,
    })
}

impl StateSpaceModel {
    pub fn ordering(&self) -> &[PauliString] {
        &self.ordering
    }

    pub fn dim(&self) -> usize {
        self.ordering.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    /// Entries of `A`, sorted by `(row, col)`, zeros omitted.
    pub fn a(&self) -> &[Triplet] {
        &self.a
    }

    /// Always empty: the closed set makes the dynamics autonomous.
    pub fn b(&self) -> &[Triplet] {
        &self.b
    }

    pub fn c(&self) -> &[Triplet] {
        &self.c
    }

    pub fn coupling_provenance(&self) -> &[Vec<usize>] {
        &self.coupling_provenance
    }

    pub fn a_dense(&self) -> DMatrix<f64> {
        dense(self.dim(), self.dim(), &self.a)
    }

    pub fn c_dense(&self) -> DMatrix<f64> {
        dense(self.n_outputs, self.dim(), &self.c)
    }

    /// Nonzero positions of `A`, row-major.
    pub fn a_pattern(&self) -> Vec<(usize, usize)> {
        self.a.iter().map(|&(r, c, _)| (r, c)).collect()
    }

    /// Largest `|A + Aᵀ|` entry.
    pub fn antisymmetry_defect(&self) -> f64 {
        let map: HashMap<(usize, usize), f64> =
            self.a.iter().map(|&(r, c, v)| ((r, c), v)).collect();
        self.a
            .iter()
            .map(|&(r, c, v)| (v + map.get(&(c, r)).copied().unwrap_or(0.0)).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        let doc = ModelDocument {
            ordering: self.ordering.iter().map(|s| s.to_string()).collect(),
            n_qubits: self.ordering.first().map_or(0, |s| s.n_qubits()),
            n_outputs: self.n_outputs,
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
            coupling_provenance: self.coupling_provenance.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("model serializes") + "\n"
    }

    /// Loads a model and checks that `A` is exactly antisymmetric.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        let ordering = doc
            .ordering
            .iter()
            .map(|s| parse_string(s, doc.n_qubits))
            .collect::<Result<Vec<_>>>()?;
        let dim = ordering.len();
        for &(r, c, _) in &doc.a {
            if r >= dim || c >= dim {
                return Err(Error::InvalidInput(format!(
                    "A entry ({r}, {c}) outside {dim}×{dim}"
                )));
            }
        }
        for &(r, c, _) in &doc.c {
            if r >= doc.n_outputs || c >= dim {
                return Err(Error::InvalidInput(format!(
                    "C entry ({r}, {c}) out of range"
                )));
            }
        }
        if !doc.b.is_empty() {
            return Err(Error::InvalidInput("B must be empty".into()));
        }
        let mut a = doc.a;
        a.sort_by_key(|t| (t.0, t.1));
        let mut c = doc.c;
        c.sort_by_key(|t| (t.0, t.1));
        let coupling_provenance = if doc.coupling_provenance.len() == a.len() {
            doc.coupling_provenance
        } else {
            vec![Vec::new(); a.len()]
        };
        let model = StateSpaceModel {
            ordering,
            a,
            b: Vec::new(),
            c,
            n_outputs: doc.n_outputs,
            coupling_provenance,
        };
        let defect = model.antisymmetry_defect();
        if defect != 0.0 {
            return Err(Error::Inconsistency(format!(
                "A is not antisymmetric (max |A + Aᵀ| = {defect:e})"
            )));
        }
        Ok(model)
    }
}

fn dense(rows: usize, cols: usize, entries: &[Triplet]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows, cols);
    for &(r, c, v) in entries {
        m[(r, c)] += v;
    }
    m
}

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    ordering: Vec<String>,
    n_qubits: usize,
    n_outputs: usize,
    #[serde(rename = "A")]
    a: Vec<Triplet>,
    #[serde(rename = "B")]
    b: Vec<Triplet>,
    #[serde(rename = "C")]
    c: Vec<Triplet>,
    #[serde(default)]
    coupling_provenance: Vec<Vec<usize>>,
}

/// Initial state: a product of single-qubit states given by Bloch vectors,
/// or a dense density matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    Product(Vec<[f64; 3]>),
    Dense(CMatrix),
}

fn ket_bloch(token: &str) -> Option<[f64; 3]> {
    Some(match token {
        "0" => [0.0, 0.0, 1.0],
        "1" => [0.0, 0.0, -1.0],
        "+" => [1.0, 0.0, 0.0],
        "-" | "−" => [-1.0, 0.0, 0.0],
        "i+" | "+i" => [0.0, 1.0, 0.0],
        "i-" | "i−" | "-i" => [0.0, -1.0, 0.0],
        _ => return None,
    })
}

impl InitialState {
    /// Parses a product state such as `"0,1,+,i-"`.
    pub fn parse_product(text: &str) -> Result<Self> {
        let blochs = text
            .split(',')
            .map(str::trim)
            .map(|t| {
                ket_bloch(t)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown single-qubit state '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(InitialState::Product(blochs))
    }

    /// Validates trace, Hermiticity and positivity.
    pub fn dense(rho: CMatrix) -> Result<Self> {
        validate_density(&rho)?;
        Ok(InitialState::Dense(rho))
    }

    pub fn n_qubits(&self) -> Result<usize> {
        match self {
            InitialState::Product(b) => Ok(b.len()),
            InitialState::Dense(m) => qubits_for_dim(m.nrows()),
        }
    }

    /// `Tr(P ρ)`.
    pub fn expectation(&self, p: &PauliString) -> f64 {
        match self {
            InitialState::Product(blochs) => p
                .support()
                .map(|(site, cell)| match cell {
                    Cell::X => blochs[site][0],
                    Cell::Y => blochs[site][1],
                    Cell::Z => blochs[site][2],
                    Cell::I => 1.0,
                })
                .product(),
            InitialState::Dense(rho) => trace_with(p, rho).re,
        }
    }
}

pub fn validate_density(rho: &CMatrix) -> Result<()> {
    if rho.nrows() != rho.ncols() {
        return Err(Error::InvalidDensity(format!(
            "{}×{} is not square",
            rho.nrows(),
            rho.ncols()
        )));
    }
    qubits_for_dim(rho.nrows())?;
    let dev = hermitian_deviation(rho);
    if dev > 1e-10 {
        return Err(Error::InvalidDensity(format!(
            "not Hermitian (deviation {dev:e})"
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::InvalidDensity(format!("trace is {tr}, not 1")));
    }
    let min = SymmetricEigen::new(rho.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min < -1e-10 {
        return Err(Error::InvalidDensity(format!(
            "negative eigenvalue {min:e}"
        )));
    }
    Ok(())
}

/// `x₀[k] = Tr(O_k ρ₀)` over the model ordering.
pub fn initial_state_vector(
    state: &InitialState,
    ordering: &[PauliString],
) -> Result<DVector<f64>> {
    let n = state.n_qubits()?;
    if let Some(first) = ordering.first() {
        if first.n_qubits() != n {
            return Err(Error::DimensionMismatch {
                left: first.n_qubits(),
                right: n,
            });
        }
    }
    Ok(DVector::from_iterator(
        ordering.len(),
        ordering.iter().map(|p| state.expectation(p)),
    ))
}

/// Evenly spaced sample times `start, start + step, …` up to `stop`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl TimeGrid {
    /// Parses `start:stop:step`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "time grid '{text}' is not start:stop:step"
            )));
        }
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad number '{s}' in time grid")))
        };
        let grid = TimeGrid {
            start: num(parts[0])?,
            stop: num(parts[1])?,
            step: num(parts[2])?,
        };
        grid.points()?;
        Ok(grid)
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        let ok = self.start.is_finite() && self.stop.is_finite() && self.step.is_finite();
        if !ok || self.start < 0.0 || self.stop < self.start || self.step <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "time grid {}:{}:{} must satisfy 0 ≤ start ≤ stop, step > 0",
                self.start, self.stop, self.step
            )));
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..count)
            .map(|i| self.start + i as f64 * self.step)
            .collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Integrator {
    /// Dense `exp(A Δt)` propagation, cached per distinct step.
    Exponential,
    /// Classical fourth-order Runge–Kutta with at most `max_step` per substep.
    RungeKutta { max_step: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// One state vector per time.
    pub states: Vec<DVector<f64>>,
    /// One output vector `C x` per time.
    pub outputs: Vec<DVector<f64>>,
    pub diagnostics: Vec<String>,
}

impl Trajectory {
    /// CSV with header `t,x_1..x_No,y_1..y_r`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        let (nx, ny) = (
            self.states.first().map_or(0, |x| x.len()),
            self.outputs.first().map_or(0, |y| y.len()),
        );
        for i in 1..=nx {
            let _ = write!(out, ",x_{i}");
        }
        for i in 1..=ny {
            let _ = write!(out, ",y_{i}");
        }
        out.push('\n');
        for ((t, x), y) in self.times.iter().zip(&self.states).zip(&self.outputs) {
            let _ = write!(out, "{t}");
            for v in x.iter().chain(y.iter()) {
                // Adding 0.0 turns -0 into 0.
                let _ = write!(out, ",{}", v + 0.0);
            }
            out.push('\n');
        }
        out
    }

    /// Output series `r` over all times.
    pub fn output_series(&self, r: usize) -> Vec<f64> {
        self.outputs.iter().map(|y| y[r]).collect()
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidInput(
            "times must be finite and nonnegative".into(),
        ));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidInput("times must be sorted".into()));
    }
    Ok(())
}

/// Solves `ẋ = A x`, `x(0) = x₀` at the given times and returns `y = C x`
/// alongside.
pub fn simulate(
    model: &StateSpaceModel,
    x0: &DVector<f64>,
    times: &[f64],
    integrator: Integrator,
) -> Result<Trajectory> {
    if x0.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            left: model.dim(),
            right: x0.len(),
        });
    }
    check_times(times)?;
    let a = model.a_dense();
    let c = model.c_dense();
    let (states, diagnostics) = match integrator {
        Integrator::Exponential => (propagate_exponential(&a, x0, times)?, Vec::new()),
        Integrator::RungeKutta { max_step } => propagate_rk4(&a, x0, times, max_step)?,
    };
    let outputs = states.iter().map(|x| &c * x).collect();
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        outputs,
        diagnostics,
    })
}

fn propagate_exponential(
    a: &DMatrix<f64>,
    x0: &DVector<f64>,
    times: &[f64],
) -> Result<Vec<DVector<f64>>> {
    let n = a.nrows();
    if n > EXPONENTIAL_CAP {
        return Err(Error::CapExceeded {
            what: "matrix-exponential integration",
            cap: EXPONENTIAL_CAP,
            n_qubits: n,
        });
    }
    let mut cache: Vec<(f64, DMatrix<f64>)> = Vec::new();
    let mut propagator = |dt: f64| -> DMatrix<f64> {
        let tol = 1e-13 * dt.abs().max(1.0);
        if let Some((_, u)) = cache.iter().find(|(d, _)| (d - dt).abs() <= tol) {
            return u.clone();
        }
        let u = (a * dt).exp();
        cache.push((dt, u.clone()));
        u
    };
    let mut out = Vec::with_capacity(times.len());
    let mut x = x0.clone();
    let mut t = 0.0;
    for &ti in times {
        let dt = ti - t;
        if dt != 0.0 {
            x = propagator(dt) * &x;
        }
        t = ti;
        out.push(x.clone());
    }
    Ok(out)
}

fn rk4_step(a: &DMatrix<f64>, x: &DVector<f64>, h: f64) -> DVector<f64> {
    let k1 = a * x;
    let k2 = a * (x + &k1 * (h / 2.0));
    let k3 = a * (x + &k2 * (h / 2.0));
    let k4 = a * (x + &k3 * h);
    x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

fn propagate_rk4(
    a: &DMatrix<f64>,
    x0: &DVector<f64>,
    times: &[f64],
    max_step: f64,
) -> Result<(Vec<DVector<f64>>, Vec<String>)> {
    if !(max_step > 0.0 && max_step.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "step {max_step} must be positive"
        )));
    }
    let mut diagnostics = Vec::new();
    // Row-sum norm bounds the spectral radius; RK4 is stable on the
    // imaginary axis up to |λh| ≈ 2.83.
    let bound = a
        .row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    if bound * max_step > 2.8 {
        diagnostics.push(format!(
            "step {max_step} may be unstable: ‖A‖∞·h = {:.3} exceeds 2.8",
            bound * max_step
        ));
    }
    let norm0 = x0.norm();
    let mut drift_reported = false;
    let mut out = Vec::with_capacity(times.len());
    let mut x = x0.clone();
    let mut t = 0.0;
    for &ti in times {
        let span = ti - t;
        if span > 0.0 {
            let steps = (span / max_step).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            for _ in 0..steps {
                x = rk4_step(a, &x, h);
            }
        }
        t = ti;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Unstable(format!("state diverged before t = {ti}")));
        }
        let drift = (x.norm() - norm0).abs() / norm0.max(f64::MIN_POSITIVE);
        if drift > 1e-6 && !drift_reported {
            diagnostics.push(format!(
                "norm drift {drift:.3e} at t = {ti}; reduce the step"
            ));
            drift_reported = true;
        }
        if drift > 1.0 {
            return Err(Error::Unstable(format!(
                "norm grew by a factor {:.3} by t = {ti}",
                1.0 + drift
            )));
        }
        out.push(x.clone());
    }
    Ok((out, diagnostics))
}
