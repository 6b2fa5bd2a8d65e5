//! Browser bindings. Each exported function takes plain strings and numbers
//! and returns JSON or DOT text; the `*_text` functions hold the logic so
//! they can be tested natively.

use pauli_access::pipeline::generate_ordered;
use pauli_access::statespace::{initial_state_vector, InitialState, Integrator, TimeGrid};
use pauli_access::{build_exchange_chain, build_model, simulate, HamiltonianSpec, MeasurementSpec};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest chain the page accepts; case (d) at this size has 7 200 members.
pub const MAX_SITES: usize = 25;
/// Largest state dimension the page will integrate.
pub const MAX_MODEL_DIM: usize = 600;

fn chain(n: usize, couplings: &str) -> Result<HamiltonianSpec, String> {
    if !(2..=MAX_SITES).contains(&n) {
        return Err(format!("chain length must be between 2 and {MAX_SITES}"));
    }
    let h: Vec<f64> = if couplings.trim().is_empty() {
        vec![1.0; n - 1]
    } else {
        couplings
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad coupling '{}'", c.trim()))
            })
            .collect::<Result<_, _>>()?
    };
    build_exchange_chain(n, &h).map_err(|e| e.to_string())
}

fn problem(
    n: usize,
    couplings: &str,
    meas: &str,
) -> Result<(HamiltonianSpec, MeasurementSpec), String> {
    let spec = chain(n, couplings)?;
    let meas = MeasurementSpec::parse(meas, n).map_err(|e| e.to_string())?;
    Ok((spec, meas))
}

#[derive(Serialize)]
struct BlockSummary {
    k: usize,
    size: usize,
    core: String,
}

#[derive(Serialize)]
struct SetSummary {
    members: Vec<String>,
    blocks: Vec<BlockSummary>,
    edges: usize,
    warnings: Vec<String>,
}

pub fn accessible_set_text(n: usize, couplings: &str, meas: &str) -> Result<String, String> {
    let (spec, meas) = problem(n, couplings, meas)?;
    let ordered = generate_ordered(&spec, &meas).map_err(|e| e.to_string())?;
    let members = ordered.set.members();
    let summary = SetSummary {
        members: members.iter().map(|m| m.to_string()).collect(),
        blocks: ordered
            .set
            .partition
            .iter()
            .zip(&ordered.set.cores)
            .map(|(b, &core)| BlockSummary {
                k: b.k,
                size: b.end - b.start,
                core: members[core].to_string(),
            })
            .collect(),
        edges: ordered.graph.edges().len(),
        warnings: ordered.warnings,
    };
    serde_json::to_string(&summary).map_err(|e| e.to_string())
}

pub fn access_graph_text(n: usize, couplings: &str, meas: &str) -> Result<String, String> {
    let (spec, meas) = problem(n, couplings, meas)?;
    let ordered = generate_ordered(&spec, &meas).map_err(|e| e.to_string())?;
    Ok(ordered.dot())
}

#[derive(Serialize)]
struct Series {
    labels: Vec<String>,
    times: Vec<f64>,
    outputs: Vec<Vec<f64>>,
    dim: usize,
}

pub fn simulate_chain_text(
    n: usize,
    couplings: &str,
    meas: &str,
    rho0: &str,
    t_max: f64,
    dt: f64,
) -> Result<String, String> {
    let (spec, meas) = problem(n, couplings, meas)?;
    let ordered = generate_ordered(&spec, &meas).map_err(|e| e.to_string())?;
    if ordered.set.len() > MAX_MODEL_DIM {
        return Err(format!(
            "{} states is too many to integrate here (limit {MAX_MODEL_DIM})",
            ordered.set.len()
        ));
    }
    let model = build_model(&ordered.set, &spec, &meas).map_err(|e| e.to_string())?;
    let state = InitialState::parse_product(rho0).map_err(|e| e.to_string())?;
    let x0 = initial_state_vector(&state, model.ordering()).map_err(|e| e.to_string())?;
    let times = TimeGrid {
        start: 0.0,
        stop: t_max,
        step: dt,
    }
    .points()
    .map_err(|e| e.to_string())?;
    if times.len() > 20_001 {
        return Err("at most 20000 time steps".into());
    }
    let traj = simulate(&model, &x0, &times, Integrator::Exponential).map_err(|e| e.to_string())?;
    let series = Series {
        labels: meas.operators().iter().map(|op| op.to_string()).collect(),
        outputs: (0..model.n_outputs())
            .map(|r| traj.output_series(r))
            .collect(),
        times,
        dim: model.dim(),
    };
    serde_json::to_string(&series).map_err(|e| e.to_string())
}

/// `{members, blocks: [{k, size, core}], edges, warnings}` for an exchange
/// chain. `couplings` is comma separated; empty means all 1.
#[wasm_bindgen]
pub fn accessible_set(n: usize, couplings: &str, meas: &str) -> Result<String, JsValue> {
    accessible_set_text(n, couplings, meas).map_err(|e| JsValue::from_str(&e))
}

/// Graphviz DOT of the access graph with one cluster per block.
#[wasm_bindgen]
pub fn access_graph(n: usize, couplings: &str, meas: &str) -> Result<String, JsValue> {
    access_graph_text(n, couplings, meas).map_err(|e| JsValue::from_str(&e))
}

/// `{labels, times, outputs, dim}`: measurement trajectories from a product
/// state such as `"0,1,+"`.
#[wasm_bindgen]
pub fn simulate_chain(
    n: usize,
    couplings: &str,
    meas: &str,
    rho0: &str,
    t_max: f64,
    dt: f64,
) -> Result<String, JsValue> {
    simulate_chain_text(n, couplings, meas, rho0, t_max, dt).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_d_summary() {
        let v: serde_json::Value =
            serde_json::from_str(&accessible_set_text(4, "", "Y1 Z2").unwrap()).unwrap();
        assert_eq!(v["members"].as_array().unwrap().len(), 24);
        let sizes: Vec<u64> = v["blocks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|b| b["size"].as_u64().unwrap())
            .collect();
        assert_eq!(sizes, [2, 7, 15]);
    }

    #[test]
    fn graph_is_dot() {
        let dot = access_graph_text(2, "1", "Z1").unwrap();
        assert!(dot.starts_with("graph access {"));
        assert_eq!(dot.matches(" -- ").count(), 4);
    }

    #[test]
    fn cosine_series() {
        let v: serde_json::Value =
            serde_json::from_str(&simulate_chain_text(2, "1", "Z1", "0,1", 1.0, 0.1).unwrap())
                .unwrap();
        let ys = v["outputs"][0].as_array().unwrap();
        for (i, y) in ys.iter().enumerate() {
            let t = i as f64 * 0.1;
            assert!((y.as_f64().unwrap() - (4.0 * t).cos()).abs() < 1e-8);
        }
    }

    #[test]
    fn errors_are_messages() {
        assert!(accessible_set_text(1, "", "Z1").is_err());
        assert!(accessible_set_text(3, "1,x", "Z1").is_err());
        let err = accessible_set_text(3, "", "X0").unwrap_err();
        assert!(err.contains("column 1"), "{err}");
        assert!(simulate_chain_text(3, "", "Z1", "0,1", 1.0, 0.1).is_err());
    }
}
