//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line with its measured numbers and runtime.
//!
//! Run with `cargo test -p holo-ee --test acceptance -- --nocapture`.

use std::process::Command;
use std::time::Instant;

use holo_ee_core::circuits::{
    graph_state, graph_state_circuit, is_perfect_tensor, perfect_graph_fixture,
    search_perfect_graph, Graph,
};
use holo_ee_core::mincut::{enumerate_cuts_bruteforce, min_cut};
use holo_ee_core::nmr::{
    apply_dephasing, compensate_exact_inverse, compile_circuit_to_sequence,
    diagonal_tail_duration, entropy_curve, evolve_slice, run_noisy_circuit, tomography_emulate,
    NmrSystemConfig, PulseSlice,
};
use holo_ee_core::qmath::{
    fidelity, partial_trace, partial_trace_state, renyi_entropy, von_neumann_entropy, StateVector,
};
use holo_ee_core::stabilizer::{CliffordGate, StabilizerTableau};
use holo_ee_core::tensornet::{
    boundary_entropy, build_hexagonal_tn, contract_dense, contract_stabilizer, renyi2_via_replica,
    Backend, BoundaryRegion, TensorNetwork, TensorSource,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(criterion: &str, passed: bool, details: &str, elapsed: std::time::Duration) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!(
        "ACCEPTANCE {criterion}: {verdict} — {details} [{:.2}s]",
        elapsed.as_secs_f64()
    );
    assert!(passed, "criterion {criterion} failed: {details}");
}

#[test]
fn acceptance_1_perfect_tensor_certification() {
    let start = Instant::now();
    let graph = search_perfect_graph(6).unwrap();
    let state = graph_state(&graph).unwrap();
    let result = is_perfect_tensor(&state).unwrap();
    let elapsed = start.elapsed();
    let ok = result.is_perfect && result.worst_deviation < 1e-9 && elapsed.as_secs_f64() < 5.0;
    report(
        "1 (perfect-tensor certification)",
        ok,
        &format!(
            "searched graph has {} edges, worst 3-qubit deviation {:.2e}",
            graph.n_edges(),
            result.worst_deviation
        ),
        elapsed,
    );
}

#[test]
fn acceptance_2_ideal_entropy_curve() {
    let start = Instant::now();
    let rho = graph_state(&perfect_graph_fixture())
        .unwrap()
        .to_density_matrix()
        .unwrap();
    let curve = entropy_curve(&rho).unwrap();
    let expect = [1.0, 2.0, 3.0, 2.0, 1.0];
    let mut ok = true;
    for (point, e) in curve.iter().zip(expect) {
        ok &= (point.mean_bits - e).abs() < 1e-9 && point.spread_bits.abs() < 1e-9;
    }
    let elapsed = start.elapsed();
    ok &= elapsed.as_secs_f64() < 1.0;
    let means: Vec<String> = curve.iter().map(|p| format!("{:.3}", p.mean_bits)).collect();
    report(
        "2 (ideal entropy curve)",
        ok,
        &format!("means ({}) with zero spread", means.join(", ")),
        elapsed,
    );
}

#[test]
fn acceptance_3_discrete_rt_formula() {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut ok = true;

    // single tensor: all 36 contiguous (start, length) cases via the
    // public entropy operation
    let tn0 = build_hexagonal_tn(0).unwrap();
    for startpos in 0..6usize {
        for len in 1..=6usize {
            let indices: Vec<usize> = (0..len).map(|d| (startpos + d) % 6).collect();
            let region = BoundaryRegion::new(indices);
            let s = boundary_entropy(&tn0, &region, Backend::Stabilizer).unwrap();
            let cut = min_cut(&tn0, &region).unwrap().value as f64;
            ok &= s == cut;
            checked += 1;
        }
    }

    // seven tensors: all 900 contiguous cases; contract once, which is the
    // same contraction boundary_entropy performs per call
    let tn1 = build_hexagonal_tn(1).unwrap();
    let tableau = contract_stabilizer(&tn1).unwrap();
    for startpos in 0..30usize {
        for len in 1..=30usize {
            let indices: Vec<usize> = (0..len).map(|d| (startpos + d) % 30).collect();
            let s = tableau.entanglement_entropy(&indices);
            let cut = min_cut(&tn1, &BoundaryRegion::new(indices)).unwrap().value;
            ok &= s == cut;
            checked += 1;
        }
    }
    // spot-check that the hoisted contraction equals the public operation
    let spot = BoundaryRegion::new((0..5).collect());
    ok &= boundary_entropy(&tn1, &spot, Backend::Stabilizer).unwrap()
        == tableau.entanglement_entropy(spot.indices()) as f64;

    let elapsed = start.elapsed();
    ok &= elapsed.as_secs_f64() < 60.0;
    report(
        "3 (discrete RT formula)",
        ok,
        &format!("entropy equals min-cut on {checked} contiguous regions"),
        elapsed,
    );
}

fn random_clifford_tableau(rng: &mut ChaCha8Rng, n: usize, depth: usize) -> StabilizerTableau {
    let mut t = StabilizerTableau::zero_state(n);
    for _ in 0..depth {
        let gate = match rng.gen_range(0..5) {
            0 => CliffordGate::H(rng.gen_range(0..n)),
            1 => CliffordGate::S(rng.gen_range(0..n)),
            2 => CliffordGate::X(rng.gen_range(0..n)),
            3 => CliffordGate::Z(rng.gen_range(0..n)),
            _ => {
                let a = rng.gen_range(0..n);
                let mut b = rng.gen_range(0..n);
                while b == a {
                    b = rng.gen_range(0..n);
                }
                CliffordGate::Cz(a, b)
            }
        };
        t = t.apply_clifford(&gate).unwrap();
    }
    t
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, edge_prob: f64) -> Graph {
    let mut g = Graph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(edge_prob) {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

fn random_network(rng: &mut ChaCha8Rng) -> TensorNetwork {
    let n_nodes = rng.gen_range(1..=2usize);
    let mut tn = TensorNetwork::new();
    for _ in 0..n_nodes {
        let g = if rng.gen_bool(0.5) {
            random_graph(rng, 6, 0.4)
        } else {
            perfect_graph_fixture()
        };
        tn.add_node(TensorSource::GraphSpec(g));
    }
    for _ in 0..rng.gen_range(0..=2usize) {
        let dangling = tn.dangling().to_vec();
        if dangling.len() < 4 {
            break;
        }
        let i = rng.gen_range(0..dangling.len());
        let mut j = rng.gen_range(0..dangling.len());
        while j == i {
            j = rng.gen_range(0..dangling.len());
        }
        tn.connect(dangling[i], dangling[j]).unwrap();
    }
    tn
}

#[test]
fn acceptance_4_oracle_equivalences() {
    let start = Instant::now();
    let mut ok = true;

    // (a) stabilizer rank entropy vs dense Von Neumann entropy
    let mut rng = ChaCha8Rng::seed_from_u64(1601);
    let mut entropy_checks = 0usize;
    let mut states = 0usize;
    while states < 55 {
        let n = rng.gen_range(2..=10usize);
        let t = random_clifford_tableau(&mut rng, n, 4 * n);
        let dense = t.to_statevector().unwrap();
        states += 1;
        for _ in 0..2 {
            let region: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            let s_rank = t.entanglement_entropy(&region) as f64;
            let s_dense =
                von_neumann_entropy(&partial_trace_state(&dense, &region).unwrap()).unwrap();
            ok &= (s_rank - s_dense).abs() < 1e-9;
            entropy_checks += 1;
        }
    }

    // (b) max-flow min-cut vs exhaustive enumeration
    let mut cut_checks = 0usize;
    while cut_checks < 55 {
        let tn = random_network(&mut rng);
        if tn.links().len() + tn.boundary_size() > 24 {
            continue;
        }
        let region = BoundaryRegion::new(
            (0..tn.boundary_size()).filter(|_| rng.gen_bool(0.5)).collect(),
        );
        let fast = min_cut(&tn, &region).unwrap().value;
        let slow = enumerate_cuts_bruteforce(&tn, &region).unwrap();
        ok &= fast == slow;
        cut_checks += 1;
    }

    // (c) replica Renyi-2 vs dense Renyi-2
    let mut replica_checks = 0usize;
    let mut candidates: Vec<TensorNetwork> = vec![build_hexagonal_tn(0).unwrap()];
    for _ in 0..8 {
        candidates.push(random_network(&mut rng));
    }
    for tn in &candidates {
        let Ok(contracted) = contract_dense(tn) else {
            continue;
        };
        if tn.boundary_size() > 12 {
            continue;
        }
        for _ in 0..3 {
            let indices: Vec<usize> = (0..tn.boundary_size())
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            if indices.len() > 10 {
                continue;
            }
            let via_replica =
                renyi2_via_replica(tn, &BoundaryRegion::new(indices.clone())).unwrap();
            let rho = partial_trace_state(&contracted.state, &indices).unwrap();
            let direct = renyi_entropy(&rho, 2.0).unwrap();
            ok &= (via_replica - direct).abs() < 1e-9;
            replica_checks += 1;
        }
    }
    ok &= replica_checks >= 10;

    let elapsed = start.elapsed();
    ok &= elapsed.as_secs_f64() < 120.0;
    report(
        "4 (oracle equivalences)",
        ok,
        &format!(
            "(a) {entropy_checks} entropy checks on {states} states, \
             (b) {cut_checks} cut checks, (c) {replica_checks} replica checks"
        ),
        elapsed,
    );
}

#[test]
fn acceptance_5_decoherence_reproduction() {
    let start = Instant::now();
    let cfg = NmrSystemConfig::default_six_spin();
    let circuit = graph_state_circuit(&perfect_graph_fixture());
    let ideal = graph_state(&perfect_graph_fixture())
        .unwrap()
        .to_density_matrix()
        .unwrap();

    let noisy = run_noisy_circuit(&circuit, &cfg, true).unwrap();
    let f_noisy = fidelity(&ideal, &noisy).unwrap();
    let curve_noisy = entropy_curve(&noisy).unwrap();
    let (s4, s5) = (curve_noisy[3].mean_bits, curve_noisy[4].mean_bits);

    let sequence = compile_circuit_to_sequence(&circuit, &cfg, &cfg.gate_durations).unwrap();
    let tail = diagonal_tail_duration(&sequence);
    let compensated = compensate_exact_inverse(&noisy, &cfg, tail).unwrap();
    let f_comp = fidelity(&ideal, &compensated).unwrap();
    let curve_comp = entropy_curve(&compensated).unwrap();
    let (s4c, s5c) = (curve_comp[3].mean_bits, curve_comp[4].mean_bits);

    let ok_fidelity = f_noisy > 0.85 && f_noisy < 1.0;
    let ok_excess = s4 > 2.0 && s5 > 1.0;
    let ok_direction = f_comp > f_noisy
        && (s4c - 2.0).abs() < (s4 - 2.0).abs()
        && (s5c - 1.0).abs() < (s5 - 1.0).abs();
    let elapsed = start.elapsed();
    let ok = ok_fidelity && ok_excess && ok_direction && elapsed.as_secs_f64() < 60.0;
    report(
        "5 (decoherence reproduction)",
        ok,
        &format!(
            "fidelity {f_noisy:.4} in (0.85, 1), S4 {s4:.3} > 2, S5 {s5:.3} > 1; \
             compensated: fidelity {f_comp:.4}, S4 {s4c:.3}, S5 {s5c:.3}"
        ),
        elapsed,
    );
}

#[test]
fn acceptance_6_noise_model_exactness() {
    let start = Instant::now();
    let mut ok = true;

    // single-qubit coherence after t = T2* shrinks by exactly 1/e
    let mut cfg1 = NmrSystemConfig::default_six_spin();
    cfg1.n_spins = 1;
    cfg1.nu = vec![0.0];
    cfg1.j = vec![vec![0.0]];
    cfg1.t2star = vec![0.4];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = StateVector::from_amplitudes(1, vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)])
        .unwrap()
        .to_density_matrix()
        .unwrap();
    let out = evolve_slice(&plus, &cfg1, &PulseSlice::free(0.4, 1), true).unwrap();
    let single_ratio = out.entry(0, 1).re / plus.entry(0, 1).re;
    ok &= (single_ratio - (-1.0f64).exp()).abs() < 1e-10;

    // six-qubit GHZ coherence over 60 ms shrinks by exactly e^{-0.9}
    let cfg = NmrSystemConfig::default_six_spin();
    let mut amps = vec![Complex64::new(0.0, 0.0); 64];
    amps[0] = Complex64::new(s, 0.0);
    amps[63] = Complex64::new(s, 0.0);
    let ghz = StateVector::from_amplitudes(6, amps)
        .unwrap()
        .to_density_matrix()
        .unwrap();
    let decayed = evolve_slice(&ghz, &cfg, &PulseSlice::free(0.06, 6), true).unwrap();
    let ghz_ratio = decayed.entry(0, 63).re / ghz.entry(0, 63).re;
    ok &= (ghz_ratio - (-0.9f64).exp()).abs() < 1e-10;

    // the exact-inverse map undoes a pure-dephasing (identity-circuit) decay
    let rho = graph_state(&perfect_graph_fixture())
        .unwrap()
        .to_density_matrix()
        .unwrap();
    let noisy = apply_dephasing(&rho, &cfg, 0.06).unwrap();
    let recovered = compensate_exact_inverse(&noisy, &cfg, 0.06).unwrap();
    let mut recovery_dev = 0.0f64;
    for i in 0..64 {
        for j in 0..64 {
            recovery_dev = recovery_dev.max((recovered.entry(i, j) - rho.entry(i, j)).norm());
        }
    }
    ok &= recovery_dev < 1e-8;

    let elapsed = start.elapsed();
    report(
        "6 (noise-model exactness)",
        ok,
        &format!(
            "1/e ratio error {:.1e}, e^-0.9 ratio error {:.1e}, inverse recovery {recovery_dev:.1e}",
            (single_ratio - (-1.0f64).exp()).abs(),
            (ghz_ratio - (-0.9f64).exp()).abs()
        ),
        elapsed,
    );
}

#[test]
fn acceptance_7_tomography_round_trip() {
    let start = Instant::now();
    let mut ok = true;
    let cfg = NmrSystemConfig::default_six_spin();
    let circuit = graph_state_circuit(&perfect_graph_fixture());
    let ideal_state = graph_state(&perfect_graph_fixture()).unwrap();
    let ideal = ideal_state.to_density_matrix().unwrap();
    let noisy = run_noisy_circuit(&circuit, &cfg, true).unwrap();

    // zero-shot-noise reconstructions reproduce every tested reduced matrix
    let mut max_dev = 0.0f64;
    for rho in [&ideal, &noisy] {
        for keep in [vec![0], vec![1, 4], vec![0, 2, 3], (0..5).collect::<Vec<_>>()] {
            let recon = tomography_emulate(rho, &keep, 0.0, 11).unwrap();
            let direct = partial_trace(rho, &keep).unwrap();
            for i in 0..recon.dim() {
                for j in 0..recon.dim() {
                    max_dev = max_dev.max((recon.entry(i, j) - direct.entry(i, j)).norm());
                }
            }
        }
    }
    ok &= max_dev < 1e-9;

    // full six-qubit emulated tomography of the ideal tensor
    let keep: Vec<usize> = (0..6).collect();
    let full = tomography_emulate(&ideal, &keep, 0.0, 11).unwrap();
    let f = fidelity(&ideal, &full).unwrap();
    ok &= (f - 1.0).abs() < 1e-9;

    let elapsed = start.elapsed();
    report(
        "7 (tomography round trip)",
        ok,
        &format!("reduced-matrix deviation {max_dev:.1e}, full 6-qubit fidelity {f:.10}"),
        elapsed,
    );
}

fn run_cli(args: &[&str], dir: &std::path::Path) -> (i32, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_holo-ee"))
        .args(args)
        .current_dir(dir)
        .env_remove("HOLOEE_CONFIG")
        .output()
        .expect("binary runs");
    (
        output.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&output.stdout).to_string(),
    )
}

#[test]
fn acceptance_8_cli_determinism() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/hexagon_layers1.json");
    let cases: Vec<Vec<String>> = vec![
        vec!["verify-pt".into()],
        vec![
            "entropy-curve".into(),
            "--mode".into(),
            "noisy".into(),
            "--seed".into(),
            "21".into(),
        ],
        vec![
            "rt-check".into(),
            "--layers".into(),
            "1".into(),
            "--regions".into(),
            "random:25".into(),
            "--seed".into(),
            "21".into(),
        ],
        vec![
            "nmr-run".into(),
            "--seed".into(),
            "21".into(),
            "--shot-sigma".into(),
            "0.01".into(),
            "--compensate".into(),
            "exact-inverse".into(),
        ],
        vec![
            "mincut".into(),
            "--network".into(),
            fixture.into(),
            "--region".into(),
            "0-4".into(),
        ],
    ];
    let mut ok = true;
    let mut compared = 0usize;
    for (i, case) in cases.iter().enumerate() {
        let mut artifacts = Vec::new();
        for round in 0..2 {
            let json = dir.path().join(format!("case{i}_round{round}.json"));
            let csv = dir.path().join(format!("case{i}_round{round}.csv"));
            let svg = dir.path().join(format!("case{i}_round{round}.svg"));
            let mut args: Vec<String> = case.clone();
            args.push("--json".into());
            args.push(json.display().to_string());
            if case[0] == "entropy-curve" {
                args.push("--csv".into());
                args.push(csv.display().to_string());
                args.push("--svg".into());
                args.push(svg.display().to_string());
            }
            let arg_refs: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
            let (code, _stdout) = run_cli(&arg_refs, dir.path());
            assert!(code == 0, "case {case:?} exited with {code}");
            let mut bundle = std::fs::read(&json).unwrap();
            if csv.exists() {
                bundle.extend(std::fs::read(&csv).unwrap());
            }
            if svg.exists() {
                bundle.extend(std::fs::read(&svg).unwrap());
            }
            artifacts.push(bundle);
        }
        ok &= artifacts[0] == artifacts[1];
        compared += 1;
    }
    let elapsed = start.elapsed();
    report(
        "8 (CLI determinism)",
        ok,
        &format!("{compared} commands re-run with byte-identical payloads"),
        elapsed,
    );
}

#[test]
fn cli_exit_code_contract() {
    let dir = tempfile::tempdir().unwrap();
    // scientific failure: the GHZ-like fixture is not perfect
    let (code, _) = run_cli(&["verify-pt", "--graph", "ghz-like-fixture"], dir.path());
    assert_eq!(code, 2);
    // input error: missing network file
    let (code, _) = run_cli(&["mincut", "--network", "/nonexistent.json"], dir.path());
    assert_eq!(code, 3);
    // input error: bad mode
    let (code, _) = run_cli(&["entropy-curve", "--mode", "bogus"], dir.path());
    assert_eq!(code, 3);
    // success path
    let (code, _) = run_cli(&["rt-check", "--layers", "0"], dir.path());
    assert_eq!(code, 0);
}
