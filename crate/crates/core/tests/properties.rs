//! Property-based invariants over randomized states, circuits, and networks.

use holo_ee_core::circuits::{graph_state, Circuit, Gate, Graph};
use holo_ee_core::mincut::min_cut;
use holo_ee_core::qmath::{
    fidelity, partial_trace, partial_trace_state, renyi_entropy, von_neumann_entropy, CMatrix,
    DensityMatrix, StateVector,
};
use holo_ee_core::tensornet::{BoundaryRegion, LegRef, TensorNetwork, TensorSource};
use num_complex::Complex64;
use proptest::prelude::*;

/// Random density matrix from a Ginibre draw: rho = A A' / tr(A A').
fn density_strategy(n_qubits: usize) -> impl Strategy<Value = DensityMatrix> {
    let dim = 1usize << n_qubits;
    prop::collection::vec(
        (prop::num::f64::NORMAL, prop::num::f64::NORMAL),
        dim * dim,
    )
    .prop_map(move |entries| {
        let a = CMatrix::from_fn(dim, dim, |i, j| {
            let (re, im) = entries[i * dim + j];
            // keep the raw normals bounded
            Complex64::new(re.tanh(), im.tanh())
        });
        let gram = &a * a.adjoint() + CMatrix::identity(dim, dim) * Complex64::new(1e-6, 0.0);
        let tr: f64 = (0..dim).map(|i| gram[(i, i)].re).sum();
        let mat = gram * Complex64::new(1.0 / tr, 0.0);
        DensityMatrix::try_new(n_qubits, mat).expect("Ginibre draw is a valid density matrix")
    })
}

/// Random normalized pure state.
fn pure_state_strategy(n_qubits: usize) -> impl Strategy<Value = StateVector> {
    let dim = 1usize << n_qubits;
    prop::collection::vec((prop::num::f64::NORMAL, prop::num::f64::NORMAL), dim).prop_map(
        move |entries| {
            let mut amps: Vec<Complex64> = entries
                .iter()
                .map(|&(re, im)| Complex64::new(re.tanh(), im.tanh()))
                .collect();
            amps[0] += Complex64::new(1e-3, 0.0); // avoid the zero vector
            let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for a in &mut amps {
                *a /= Complex64::new(norm, 0.0);
            }
            StateVector::from_amplitudes(n_qubits, amps).expect("normalized draw")
        },
    )
}

fn random_graph_strategy(n: usize) -> impl Strategy<Value = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .collect();
    let count = pairs.len();
    prop::collection::vec(prop::bool::ANY, count).prop_map(move |mask| {
        let mut g = Graph::new(n);
        for (keep, &(a, b)) in mask.iter().zip(&pairs) {
            if *keep {
                g.add_edge(a, b).unwrap();
            }
        }
        g
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn entropy_is_bounded_by_qubit_count(rho in density_strategy(2)) {
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!(s >= -1e-9);
        prop_assert!(s <= 2.0 + 1e-9);
    }

    #[test]
    fn renyi_entropy_is_nonincreasing_in_order(rho in density_strategy(2)) {
        let orders = [0.5, 2.0, 3.0, 4.0];
        let values: Vec<f64> = orders
            .iter()
            .map(|&n| renyi_entropy(&rho, n).unwrap())
            .collect();
        for w in values.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9, "sequence {values:?}");
        }
    }

    #[test]
    fn renyi_limit_matches_von_neumann(rho in density_strategy(2)) {
        let s = von_neumann_entropy(&rho).unwrap();
        for order in [1.0 - 1e-4, 1.0 + 1e-4] {
            let r = renyi_entropy(&rho, order).unwrap();
            prop_assert!((r - s).abs() < 1e-2, "order {order}: {r} vs {s}");
        }
    }

    #[test]
    fn partial_trace_nests(rho in density_strategy(3)) {
        let nested = partial_trace(&partial_trace(&rho, &[0, 1]).unwrap(), &[0]).unwrap();
        let direct = partial_trace(&rho, &[0]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((nested.entry(i, j) - direct.entry(i, j)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn fidelity_is_symmetric(a in density_strategy(2), b in density_strategy(2)) {
        let f_ab = fidelity(&a, &b).unwrap();
        let f_ba = fidelity(&b, &a).unwrap();
        prop_assert!((f_ab - f_ba).abs() < 1e-9, "{f_ab} vs {f_ba}");
        prop_assert!((0.0..=1.0).contains(&f_ab));
    }

    #[test]
    fn fidelity_is_one_iff_equal_for_pure_states(psi in pure_state_strategy(2)) {
        let rho = psi.to_density_matrix().unwrap();
        prop_assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pure_state_entropy_is_complement_symmetric(
        psi in pure_state_strategy(6),
        mask in 0u32..64,
    ) {
        let region: Vec<usize> = (0..6).filter(|&q| mask >> q & 1 == 1).collect();
        let complement: Vec<usize> = (0..6).filter(|q| !region.contains(q)).collect();
        let s1 = von_neumann_entropy(&partial_trace_state(&psi, &region).unwrap()).unwrap();
        let s2 = von_neumann_entropy(&partial_trace_state(&psi, &complement).unwrap()).unwrap();
        prop_assert!((s1 - s2).abs() < 1e-9, "{s1} vs {s2}");
    }

    #[test]
    fn circuits_preserve_norm(
        psi in pure_state_strategy(3),
        seeds in prop::collection::vec((0usize..3, 0usize..3, 0.0f64..6.3), 1..12),
    ) {
        let mut circuit = Circuit::new(3);
        for (kind, target, angle) in seeds {
            let gate = match kind {
                0 => Gate::H(target),
                1 => Gate::Cz(target, (target + 1) % 3),
                _ => Gate::Rx(target, angle),
            };
            circuit.push(gate).unwrap();
        }
        let out = circuit.run(&psi).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cz_application_order_is_irrelevant(g in random_graph_strategy(5), swap_seed in any::<u64>()) {
        let forward = graph_state(&g).unwrap();
        let mut gates: Vec<Gate> = (0..5).map(Gate::H).collect();
        let mut czs: Vec<Gate> = g.edges().map(|(a, b)| Gate::Cz(a, b)).collect();
        // deterministic shuffle driven by the seed
        let mut state = swap_seed;
        for i in (1..czs.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (i + 1);
            czs.swap(i, j);
        }
        gates.extend(czs);
        let shuffled = Circuit::from_gates(5, gates)
            .unwrap()
            .run(&StateVector::zero_state(5).unwrap())
            .unwrap();
        for (a, b) in forward.amplitudes().iter().zip(shuffled.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn min_cut_complement_symmetry_and_leg_monotonicity(
        g in random_graph_strategy(6),
        link_count in 0usize..3,
        mask in 0u32..4096,
    ) {
        let mut tn = TensorNetwork::new();
        let a = tn.add_node(TensorSource::GraphSpec(g.clone()));
        let b = tn.add_node(TensorSource::GraphSpec(g));
        for i in 0..link_count {
            tn.connect(LegRef::new(a, i), LegRef::new(b, i)).unwrap();
        }
        let boundary = tn.boundary_size();
        let indices: Vec<usize> = (0..boundary).filter(|&i| mask >> i & 1 == 1).collect();
        let region = BoundaryRegion::new(indices.clone());

        let value = min_cut(&tn, &region).unwrap().value;
        let comp = min_cut(&tn, &region.complement(boundary)).unwrap().value;
        prop_assert_eq!(value, comp);

        // adding one dangling leg to the region changes the cut by at most 1
        if let Some(extra) = (0..boundary).find(|i| !indices.contains(i)) {
            let mut grown = indices.clone();
            grown.push(extra);
            let grown_value = min_cut(&tn, &BoundaryRegion::new(grown)).unwrap().value;
            prop_assert!(grown_value.abs_diff(value) <= 1);
        }
    }
}
