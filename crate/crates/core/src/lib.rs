//! Accessible sets of Pauli-string observables for qubit networks.
//!
//! The pipeline is:
//!
//! 1. [`hamiltonian`]: parse or build a Hamiltonian and measurement set and
//!    reduce both to strings of Ω.
//! 2. [`closure`]: close the measurement strings under brackets with the
//!    Hamiltonian strings to get the accessible set.
//! 3. [`graph`]: the labeled access graph, its k-finite layering and a
//!    block-by-block ordering of the set.
//! 4. [`statespace`]: the real linear model `ẋ = Ax, y = Cx` over the
//!    expectation values of the ordered set, and its integrators.
//!
//! [`oracle`] evolves the full `2^n`-dimensional system densely and is used
//! to validate the reduced models.

pub mod cases;
pub mod closure;
pub mod dense;
pub mod error;
pub mod graph;
pub mod hamiltonian;
pub mod oracle;
pub mod pauli;
pub mod pipeline;
pub mod statespace;
pub mod verify;

pub use closure::{chain_closed_form, generate, generate_reference, AccessibleSet, Axis};
pub use error::{Error, Result};
pub use graph::{build_graph, order_members, partition_k_finite, AccessGraph, KFinitePartition};
pub use hamiltonian::{build_exchange_chain, HamiltonianSpec, MeasurementSpec};
pub use pauli::{bracket, bracket_normalized, multiply, PauliString, WeightedPauliSum};
pub use statespace::{build_model, simulate, StateSpaceModel};
