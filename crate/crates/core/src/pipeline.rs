//! End-to-end runs: generate, order, model and simulate.

use crate::closure::{generate, AccessibleSet};
use crate::error::{Error, Result};
use crate::graph::{
    build_graph, export_dot, export_json, order_members, partition_k_finite, AccessGraph,
    KFinitePartition,
};
use crate::hamiltonian::{HamiltonianSpec, MeasurementSpec};
use crate::pauli::PauliString;
use crate::statespace::{
    build_model, initial_state_vector, simulate, InitialState, Integrator, StateSpaceModel,
    Trajectory,
};

/// An ordered accessible set with the graph and partition built on it.
#[derive(Clone, Debug)]
pub struct OrderedSet {
    pub set: AccessibleSet,
    pub graph: AccessGraph,
    pub partition: KFinitePartition,
    pub digamma: Vec<PauliString>,
    pub warnings: Vec<String>,
}

impl OrderedSet {
    /// Member count followed by `k:size` per block.
    pub fn summary(&self) -> String {
        let blocks: Vec<String> = self
            .set
            .partition
            .iter()
            .map(|b| format!("{}:{}", b.k, b.end - b.start))
            .collect();
        format!("members {}\nblocks {}\n", self.set.len(), blocks.join(" "))
    }

    pub fn dot(&self) -> String {
        export_dot(&self.set, &self.graph, &self.partition)
    }

    pub fn graph_json(&self) -> String {
        export_json(&self.set, &self.graph, &self.partition)
    }
}

/// Orders an existing set and rebuilds graph and partition on the new
/// indices.
pub fn order_set(set: &AccessibleSet, digamma: &[PauliString]) -> Result<OrderedSet> {
    let graph = build_graph(set, digamma)?;
    let partition = partition_k_finite(set)?;
    let ordering = order_members(set, &graph, &partition)?;
    let ordered = ordering.set;
    let graph = build_graph(&ordered, digamma)?;
    // Cores depend only on discovery depth and string order, so they are
    // the same members as before the permutation.
    let partition = partition_k_finite(&ordered)?;
    let mut digamma = digamma.to_vec();
    digamma.sort();
    digamma.dedup();
    Ok(OrderedSet {
        set: ordered,
        graph,
        partition,
        digamma,
        warnings: ordering.warnings,
    })
}

/// Generates from the measurement strings and orders the result.
pub fn generate_ordered(spec: &HamiltonianSpec, meas: &MeasurementSpec) -> Result<OrderedSet> {
    if spec.n_qubits() != meas.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: spec.n_qubits(),
            right: meas.n_qubits(),
        });
    }
    let digamma = spec.digamma();
    let set = generate(&digamma, meas.decomposed())?;
    order_set(&set, &digamma)
}

/// Text artifacts of one full run.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifacts {
    pub set_json: String,
    pub graph_dot: String,
    pub graph_json: String,
    pub model_json: String,
    pub trajectory_csv: String,
    pub summary: String,
    pub warnings: Vec<String>,
}

pub struct RunOutput {
    pub ordered: OrderedSet,
    pub model: StateSpaceModel,
    pub trajectory: Trajectory,
}

pub fn run(
    spec: &HamiltonianSpec,
    meas: &MeasurementSpec,
    initial: &InitialState,
    times: &[f64],
    integrator: Integrator,
) -> Result<RunOutput> {
    let ordered = generate_ordered(spec, meas)?;
    let model = build_model(&ordered.set, spec, meas)?;
    let x0 = initial_state_vector(initial, model.ordering())?;
    let trajectory = simulate(&model, &x0, times, integrator)?;
    Ok(RunOutput {
        ordered,
        model,
        trajectory,
    })
}

impl RunOutput {
    pub fn artifacts(&self) -> Artifacts {
        let mut warnings = self.ordered.warnings.clone();
        warnings.extend(self.trajectory.diagnostics.iter().cloned());
        Artifacts {
            set_json: self.ordered.set.to_json(Some(&self.ordered.digamma)),
            graph_dot: self.ordered.dot(),
            graph_json: self.ordered.graph_json(),
            model_json: self.model.to_json(),
            trajectory_csv: self.trajectory.to_csv(),
            summary: self.ordered.summary(),
            warnings,
        }
    }
}
