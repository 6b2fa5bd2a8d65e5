use std::collections::HashSet;

use nalgebra::DVector;
use num_complex::Complex64;
use pauli_access::closure::REFERENCE_CAP;
use pauli_access::dense::{commutator, decompose, max_abs_diff, pauli_matrix, sum_matrix};
use pauli_access::graph::{build_graph, check_label_symmetry, check_simple, is_connected};
use pauli_access::pauli::{Cell, PauliString};
use pauli_access::pipeline::generate_ordered;
use pauli_access::statespace::{simulate, Integrator};
use pauli_access::{
    bracket, bracket_normalized, build_exchange_chain, build_model, generate, generate_reference,
    multiply, HamiltonianSpec, MeasurementSpec, WeightedPauliSum,
};
use proptest::prelude::*;

fn string(n: usize) -> impl Strategy<Value = PauliString> {
    prop::collection::vec(0usize..4, n).prop_map(|cells| {
        let cells: Vec<Cell> = cells.into_iter().map(|c| Cell::ALL[c]).collect();
        PauliString::from_cells(&cells)
    })
}

fn non_identity(n: usize) -> impl Strategy<Value = PauliString> {
    string(n).prop_filter("non-identity", |s| !s.is_identity())
}

fn pair(max_n: usize) -> impl Strategy<Value = (PauliString, PauliString)> {
    (1..=max_n).prop_flat_map(|n| (string(n), string(n)))
}

/// A random Hamiltonian on `n` sites: a few strings with nonzero weights.
fn hamiltonian(n: usize, max_terms: usize) -> impl Strategy<Value = HamiltonianSpec> {
    prop::collection::vec(
        (non_identity(n), 0.25f64..2.0, any::<bool>()),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        let mut sum = WeightedPauliSum::new(n);
        for (s, h, neg) in terms {
            sum.add(if neg { -h } else { h }, s).unwrap();
        }
        HamiltonianSpec::new(sum.prune(1e-12))
    })
}

fn problem(max_n: usize) -> impl Strategy<Value = (HamiltonianSpec, PauliString)> {
    (1..=max_n).prop_flat_map(|n| (hamiltonian(n, 4), non_identity(n)))
}

fn i_pow(k: u8) -> Complex64 {
    [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ][k as usize]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_matches_dense((a, b) in pair(3)) {
        let p = multiply(&a, &b).unwrap();
        let lhs = pauli_matrix(&a) * pauli_matrix(&b);
        let rhs = pauli_matrix(&p.string) * i_pow(p.phase);
        prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn bracket_matches_dense_commutator((a, b) in pair(3)) {
        let dense = commutator(&pauli_matrix(&a), &pauli_matrix(&b));
        match bracket(&a, &b).unwrap() {
            None => prop_assert!(dense.iter().all(|v| v.norm() < 1e-12)),
            Some(br) => {
                prop_assert!(br.coefficient.abs() == 2.0);
                let expected = pauli_matrix(&br.string) * Complex64::new(0.0, br.coefficient);
                prop_assert!(max_abs_diff(&dense, &expected) < 1e-12);
            }
        }
    }

    #[test]
    fn bracket_is_antisymmetric((a, b) in pair(5)) {
        let ab = bracket(&a, &b).unwrap();
        let ba = bracket(&b, &a).unwrap();
        match (ab, ba) {
            (None, None) => {}
            (Some(x), Some(y)) => {
                prop_assert_eq!(&x.string, &y.string);
                prop_assert_eq!(x.coefficient, -y.coefficient);
            }
            _ => prop_assert!(false, "commutation is not symmetric"),
        }
        prop_assert_eq!(bracket_normalized(&a, &b).unwrap(), bracket_normalized(&b, &a).unwrap());
    }

    #[test]
    fn decomposition_round_trips(n in 1usize..=3, terms in prop::collection::vec((0usize..64, -2.0f64..2.0), 1..6)) {
        let all = pauli_access::dense::all_strings(n);
        let mut sum = WeightedPauliSum::new(n);
        for (i, c) in terms {
            sum.add(c, all[i % all.len()].clone()).unwrap();
        }
        let back = decompose(&sum_matrix(&sum)).unwrap();
        let original = sum.clone().prune(1e-10);
        for (c, s) in original.terms() {
            prop_assert!((back.coefficient_of(s) - c).abs() < 1e-12);
        }
        prop_assert_eq!(back.len(), original.len());
    }

    #[test]
    fn generation_matches_reference((spec, seed) in problem(3)) {
        let d = spec.digamma();
        let fast = generate(&d, std::slice::from_ref(&seed)).unwrap();
        let slow = generate_reference(&d, &[seed], REFERENCE_CAP).unwrap();
        prop_assert_eq!(fast.member_set(), slow.member_set());
        prop_assert!(fast.is_fixpoint(&d).unwrap());
    }

    #[test]
    fn graphs_are_simple_symmetric_and_connected((spec, seed) in problem(4)) {
        let d = spec.digamma();
        let set = generate(&d, &[seed]).unwrap();
        let g = build_graph(&set, &d).unwrap();
        prop_assert!(check_simple(&g));
        prop_assert!(check_label_symmetry(&set, &g).unwrap());
        prop_assert!(is_connected(&g));
    }

    #[test]
    fn any_member_regenerates_a_connected_set((spec, seed) in problem(4), pick in any::<prop::sample::Index>()) {
        let d = spec.digamma();
        let set = generate(&d, &[seed]).unwrap();
        let member = set.members()[pick.index(set.len())].clone();
        prop_assert_eq!(generate(&d, &[member]).unwrap().member_set(), set.member_set());
    }

    #[test]
    fn model_is_antisymmetric_and_norm_preserving((spec, seed) in problem(4), t in 0.0f64..5.0) {
        let meas = MeasurementSpec::from_strings(&[seed]).unwrap();
        let ordered = generate_ordered(&spec, &meas).unwrap();
        let model = build_model(&ordered.set, &spec, &meas).unwrap();
        prop_assert_eq!(model.antisymmetry_defect(), 0.0);
        let x0 = DVector::from_fn(model.dim(), |i, _| ((i * 37 % 11) as f64 - 5.0) / 5.0);
        let traj = simulate(&model, &x0, &[t], Integrator::Exponential).unwrap();
        prop_assert!((traj.states[0].norm() - x0.norm()).abs() < 1e-9);
    }

    #[test]
    fn doubling_couplings_doubles_a(couplings in prop::collection::vec(0.5f64..2.0, 3)) {
        let spec = build_exchange_chain(4, &couplings).unwrap();
        let doubled: Vec<f64> = couplings.iter().map(|h| 2.0 * h).collect();
        let spec2 = build_exchange_chain(4, &doubled).unwrap();
        let meas = MeasurementSpec::parse("Y1 Z2", 4).unwrap();
        let ordered = generate_ordered(&spec, &meas).unwrap();
        let a1 = build_model(&ordered.set, &spec, &meas).unwrap().a_dense();
        let a2 = build_model(&ordered.set, &spec2, &meas).unwrap().a_dense();
        prop_assert_eq!(a1 * 2.0, a2);
    }
}

#[test]
fn chain_prefixes_give_nested_sets() {
    let n = 6;
    let full = build_exchange_chain(n, &vec![1.0; n - 1])
        .unwrap()
        .digamma();
    for seed in ["Z1", "Y1 Z2", "X1 Y2 Z3"] {
        let seed = pauli_access::pauli::parse_string(seed, n).unwrap();
        let mut previous: HashSet<PauliString> = HashSet::new();
        for l in 1..n {
            // Strings supported on sites 1..=l+1.
            let prefix: Vec<PauliString> = full
                .iter()
                .filter(|s| s.highest_site().unwrap() <= l)
                .cloned()
                .collect();
            let set = generate(&prefix, std::slice::from_ref(&seed))
                .unwrap()
                .member_set();
            assert!(previous.is_subset(&set), "l={l}");
            previous = set;
        }
    }
}
