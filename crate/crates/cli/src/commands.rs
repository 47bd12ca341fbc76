//! The five subcommands. Each returns the process exit code on success
//! (0, or 2 for a failed scientific check); input and configuration problems
//! surface as errors and map to exit code 3.

use std::path::{Path, PathBuf};

use clap::Args;
use serde_json::json;

use holo_ee_core::circuits::{
    ghz_like_graph_fixture, graph_state, graph_state_circuit, is_perfect_tensor,
    perfect_graph_fixture, search_perfect_graph, Graph,
};
use holo_ee_core::error::{Error, Result};
use holo_ee_core::mincut::min_cut;
use holo_ee_core::nmr::{
    compensate_exact_inverse, compile_circuit_to_sequence, diagonal_tail_duration, entropy_curve,
    rescale_offdiagonal, run_noisy_circuit, tomography_emulate, EntropyCurvePoint,
    NmrSystemConfig,
};
use holo_ee_core::qmath::{fidelity, partial_trace_state, purity, von_neumann_entropy, DensityMatrix};
use holo_ee_core::stabilizer::StabilizerTableau;
use holo_ee_core::tensornet::{
    build_hexagonal_tn, contract_dense, contract_stabilizer, BoundaryRegion, NetworkFile,
    TensorNetwork,
};

use crate::report::{config_hash, DensityMatrixJson, RunReport};
use crate::svg::entropy_curve_svg;

fn io_error(context: &str, e: std::io::Error) -> Error {
    Error::Configuration(format!("{context}: {e}"))
}

/// Loads the NMR config from --config, the HOLOEE_CONFIG variable, or the
/// built-in six-spin default. Returns the config and its canonical hash.
fn load_nmr_config(path: &Option<PathBuf>) -> Result<(NmrSystemConfig, String)> {
    let from_env = std::env::var_os("HOLOEE_CONFIG").map(PathBuf::from);
    let chosen = path.clone().or(from_env);
    let cfg = match &chosen {
        Some(p) => {
            let bytes = std::fs::read(p)
                .map_err(|e| io_error(&format!("reading config {}", p.display()), e))?;
            serde_json::from_slice::<NmrSystemConfig>(&bytes)
                .map_err(|e| Error::Configuration(format!("parsing config: {e}")))?
        }
        None => NmrSystemConfig::default_six_spin(),
    };
    cfg.validate()?;
    let canonical =
        serde_json::to_vec(&cfg).map_err(|e| Error::Internal(format!("serializing config: {e}")))?;
    Ok((cfg, config_hash(&canonical)))
}

fn write_text(path: &Path, text: &str, what: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| io_error(&format!("writing {what}"), e))
}

fn write_report(path: &Option<PathBuf>, report: &RunReport) -> Result<()> {
    if let Some(p) = path {
        report.write(p).map_err(|e| io_error("writing report", e))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify-pt

#[derive(Debug, Args)]
pub struct VerifyPtArgs {
    /// Which 6-vertex graph to certify: "searched" or "ghz-like-fixture".
    #[arg(long, default_value = "searched")]
    pub graph: String,
    /// Write the JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

pub fn cmd_verify_pt(args: &VerifyPtArgs) -> Result<i32> {
    let graph: Graph = match args.graph.as_str() {
        "searched" => search_perfect_graph(6)?,
        "ghz-like-fixture" => ghz_like_graph_fixture(),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown graph '{other}' (expected 'searched' or 'ghz-like-fixture')"
            )))
        }
    };
    let state = graph_state(&graph)?;
    let report = is_perfect_tensor(&state)?;

    println!("graph: {} ({} edges)", args.graph, graph.n_edges());
    println!("worst deviation from I/8: {:.3e}", report.worst_deviation);
    match report.failing_subset {
        None => println!("perfect tensor: yes"),
        Some(subset) => println!("perfect tensor: no (failing subset {subset:?})"),
    }

    let results = json!({
        "graph": args.graph,
        "edges": graph.edge_vec(),
        "is_perfect": report.is_perfect,
        "worst_deviation": report.worst_deviation,
        "failing_subset": report.failing_subset,
    });
    let hash = config_hash(format!("graph={}", args.graph).as_bytes());
    write_report(
        &args.json,
        &RunReport::new("verify-pt", hash, None, results),
    )?;
    Ok(if report.is_perfect { 0 } else { 2 })
}

// ---------------------------------------------------------------------------
// entropy-curve

#[derive(Debug, Args)]
pub struct EntropyCurveArgs {
    /// ideal, noisy, or compensated.
    #[arg(long, default_value = "ideal")]
    pub mode: String,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Write the frozen-format CSV table here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write the curve plot here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

fn curve_rows_json(points: &[EntropyCurvePoint]) -> serde_json::Value {
    let rows: Vec<_> = points
        .iter()
        .map(|p| {
            json!({
                "k": p.k,
                "mean_bits": p.mean_bits,
                "spread_bits": p.spread_bits,
                "ideal_bits": p.k.min(6 - p.k),
                "maxent_bits": p.k,
            })
        })
        .collect();
    serde_json::Value::Array(rows)
}

fn curve_csv(points: &[EntropyCurvePoint]) -> String {
    let mut out = String::from("k,mean_bits,spread_bits,ideal_bits,maxent_bits\n");
    for p in points {
        out.push_str(&format!(
            "{},{:.9},{:.9},{},{}\n",
            p.k,
            p.mean_bits,
            p.spread_bits,
            p.k.min(6 - p.k),
            p.k
        ));
    }
    out
}

fn print_curve(points: &[EntropyCurvePoint]) {
    println!("k  mean_bits    spread_bits  ideal  maxent");
    for p in points {
        println!(
            "{}  {:<11.6}  {:<11.6}  {:<5}  {}",
            p.k,
            p.mean_bits,
            p.spread_bits,
            p.k.min(6 - p.k),
            p.k
        );
    }
}

/// The three curve sources: the ideal tensor, the decohered run, and the
/// decohered run after exact-inverse compensation.
fn curve_state(mode: &str, cfg: &NmrSystemConfig) -> Result<DensityMatrix> {
    let circuit = graph_state_circuit(&perfect_graph_fixture());
    match mode {
        "ideal" => graph_state(&perfect_graph_fixture())?.to_density_matrix(),
        "noisy" => run_noisy_circuit(&circuit, cfg, true),
        "compensated" => {
            let noisy = run_noisy_circuit(&circuit, cfg, true)?;
            let sequence = compile_circuit_to_sequence(&circuit, cfg, &cfg.gate_durations)?;
            compensate_exact_inverse(&noisy, cfg, diagonal_tail_duration(&sequence))
        }
        other => Err(Error::Configuration(format!(
            "unknown mode '{other}' (expected ideal, noisy, or compensated)"
        ))),
    }
}

pub fn cmd_entropy_curve(args: &EntropyCurveArgs) -> Result<i32> {
    let (cfg, hash) = load_nmr_config(&args.config)?;
    let rho = curve_state(&args.mode, &cfg)?;
    let points = entropy_curve(&rho)?;

    println!("mode: {}", args.mode);
    print_curve(&points);

    if let Some(path) = &args.csv {
        write_text(path, &curve_csv(&points), "CSV table")?;
    }
    if let Some(path) = &args.svg {
        let title = format!("k-window entanglement entropy ({})", args.mode);
        write_text(path, &entropy_curve_svg(&points, &title), "SVG plot")?;
    }
    let results = json!({
        "mode": args.mode,
        "curve": curve_rows_json(&points),
    });
    write_report(
        &args.json,
        &RunReport::new("entropy-curve", hash, Some(args.seed), results),
    )?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// rt-check

#[derive(Debug, Args)]
pub struct RtCheckArgs {
    /// Hexagonal network layers: 0 or 1.
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    /// "all-contiguous" or "random:N".
    #[arg(long, default_value = "all-contiguous")]
    pub regions: String,
    /// stabilizer or dense.
    #[arg(long, default_value = "stabilizer")]
    pub backend: String,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

fn enumerate_regions(spec: &str, boundary: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if spec == "all-contiguous" {
        let mut regions = Vec::with_capacity(boundary * boundary);
        for start in 0..boundary {
            for len in 1..=boundary {
                regions.push((0..len).map(|d| (start + d) % boundary).collect());
            }
        }
        return Ok(regions);
    }
    if let Some(count) = spec.strip_prefix("random:") {
        let count: usize = count
            .parse()
            .map_err(|_| Error::Configuration(format!("bad region count in '{spec}'")))?;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut regions = Vec::with_capacity(count);
        for _ in 0..count {
            regions.push((0..boundary).filter(|_| rng.gen_bool(0.5)).collect());
        }
        return Ok(regions);
    }
    Err(Error::Configuration(format!(
        "unknown region spec '{spec}' (expected 'all-contiguous' or 'random:N')"
    )))
}

enum ContractedBackend {
    Stabilizer(StabilizerTableau),
    Dense(holo_ee_core::qmath::StateVector),
}

impl ContractedBackend {
    fn entropy(&self, region: &[usize]) -> Result<f64> {
        match self {
            ContractedBackend::Stabilizer(t) => Ok(t.entanglement_entropy(region) as f64),
            ContractedBackend::Dense(state) => {
                let n = state.n_qubits();
                let side: Vec<usize> = if region.len() <= n / 2 {
                    region.to_vec()
                } else {
                    (0..n).filter(|q| !region.contains(q)).collect()
                };
                von_neumann_entropy(&partial_trace_state(state, &side)?)
            }
        }
    }
}

pub fn cmd_rt_check(args: &RtCheckArgs) -> Result<i32> {
    let tn = build_hexagonal_tn(args.layers)?;
    let contracted = match args.backend.as_str() {
        "stabilizer" => ContractedBackend::Stabilizer(contract_stabilizer(&tn)?),
        "dense" => ContractedBackend::Dense(contract_dense(&tn)?.state),
        other => {
            return Err(Error::Configuration(format!(
                "unknown backend '{other}' (expected 'stabilizer' or 'dense')"
            )))
        }
    };
    let regions = enumerate_regions(&args.regions, tn.boundary_size(), args.seed)?;

    let mut rows = Vec::with_capacity(regions.len());
    let mut mismatches = 0usize;
    for indices in &regions {
        let entropy = contracted.entropy(indices)?;
        let cut = min_cut(&tn, &BoundaryRegion::new(indices.clone()))?.value;
        let matches = (entropy - cut as f64).abs() < 1e-9;
        if !matches {
            mismatches += 1;
            println!(
                "MISMATCH region={indices:?} entropy={entropy} min_cut={cut}"
            );
        }
        rows.push(json!({
            "region": indices,
            "entropy_bits": entropy,
            "min_cut": cut,
            "matches": matches,
        }));
    }
    println!(
        "layers={} backend={} regions={} mismatches={}",
        args.layers,
        args.backend,
        regions.len(),
        mismatches
    );

    let results = json!({
        "layers": args.layers,
        "backend": args.backend,
        "region_spec": args.regions,
        "checked": regions.len(),
        "mismatches": mismatches,
        "rows": rows,
    });
    let hash = config_hash(
        format!(
            "layers={};backend={};regions={}",
            args.layers, args.backend, args.regions
        )
        .as_bytes(),
    );
    write_report(
        &args.json,
        &RunReport::new("rt-check", hash, Some(args.seed), results),
    )?;
    Ok(if mismatches == 0 { 0 } else { 2 })
}

// ---------------------------------------------------------------------------
// nmr-run

#[derive(Debug, Args)]
pub struct NmrRunArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Disable the dephasing noise.
    #[arg(long)]
    pub noiseless: bool,
    /// Gaussian width of the emulated tomography shot noise.
    #[arg(long, default_value_t = 0.0)]
    pub shot_sigma: f64,
    /// none, exact-inverse, or uniform:FACTOR.
    #[arg(long, default_value = "none")]
    pub compensate: String,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

pub fn cmd_nmr_run(args: &NmrRunArgs) -> Result<i32> {
    let (cfg, hash) = load_nmr_config(&args.config)?;
    let circuit = graph_state_circuit(&perfect_graph_fixture());
    let ideal = graph_state(&perfect_graph_fixture())?.to_density_matrix()?;

    let run_state = run_noisy_circuit(&circuit, &cfg, !args.noiseless)?;
    let keep: Vec<usize> = (0..6).collect();
    let rho_e = tomography_emulate(&run_state, &keep, args.shot_sigma, args.seed)?;
    let fidelity_e = fidelity(&ideal, &rho_e)?;
    let curve_e = entropy_curve(&rho_e)?;

    println!(
        "noise: {}  shot_sigma: {}",
        if args.noiseless { "off" } else { "on" },
        args.shot_sigma
    );
    println!("fidelity to ideal tensor: {fidelity_e:.6}");
    println!("purity: {:.6}", purity(&rho_e));
    print_curve(&curve_e);

    let compensation = match args.compensate.as_str() {
        "none" => None,
        "exact-inverse" => {
            let sequence = compile_circuit_to_sequence(&circuit, &cfg, &cfg.gate_durations)?;
            let tail = diagonal_tail_duration(&sequence);
            Some(("exact-inverse".to_string(), compensate_exact_inverse(&rho_e, &cfg, tail)?))
        }
        other => match other.strip_prefix("uniform:") {
            Some(factor) => {
                let factor: f64 = factor.parse().map_err(|_| {
                    Error::Configuration(format!("bad rescale factor in '{other}'"))
                })?;
                Some((other.to_string(), rescale_offdiagonal(&rho_e, factor)?))
            }
            None => {
                return Err(Error::Configuration(format!(
                    "unknown compensation '{other}' (expected none, exact-inverse, or uniform:F)"
                )))
            }
        },
    };
    let compensation_json = match &compensation {
        None => serde_json::Value::Null,
        Some((kind, rho_c)) => {
            let fidelity_c = fidelity(&ideal, rho_c)?;
            let curve_c = entropy_curve(rho_c)?;
            println!("compensation: {kind}");
            println!("compensated fidelity: {fidelity_c:.6}");
            print_curve(&curve_c);
            json!({
                "kind": kind,
                "fidelity": fidelity_c,
                "curve": curve_rows_json(&curve_c),
            })
        }
    };

    let results = json!({
        "noise_on": !args.noiseless,
        "shot_sigma": args.shot_sigma,
        "fidelity": fidelity_e,
        "purity": purity(&rho_e),
        "curve": curve_rows_json(&curve_e),
        "compensation": compensation_json,
        "rho": serde_json::to_value(DensityMatrixJson::from_density(&rho_e))
            .map_err(|e| Error::Internal(format!("serializing rho: {e}")))?,
    });
    write_report(
        &args.json,
        &RunReport::new("nmr-run", hash, Some(args.seed), results),
    )?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// mincut

#[derive(Debug, Args)]
pub struct MincutArgs {
    /// Network description file (JSON).
    #[arg(long)]
    pub network: PathBuf,
    /// Boundary region: comma-separated indices, ranges allowed ("0-4,7").
    #[arg(long, default_value = "")]
    pub region: String,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

fn parse_region(spec: &str) -> Result<Vec<usize>> {
    let mut indices = Vec::new();
    for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
        let part = part.trim();
        if let Some((lo, hi)) = part.split_once('-') {
            let lo: usize = lo
                .trim()
                .parse()
                .map_err(|_| Error::Configuration(format!("bad region token '{part}'")))?;
            let hi: usize = hi
                .trim()
                .parse()
                .map_err(|_| Error::Configuration(format!("bad region token '{part}'")))?;
            if hi < lo {
                return Err(Error::Configuration(format!("empty range '{part}'")));
            }
            indices.extend(lo..=hi);
        } else {
            indices.push(
                part.parse()
                    .map_err(|_| Error::Configuration(format!("bad region token '{part}'")))?,
            );
        }
    }
    Ok(indices)
}

fn load_network(path: &Path) -> Result<(TensorNetwork, String)> {
    let bytes =
        std::fs::read(path).map_err(|e| io_error(&format!("reading {}", path.display()), e))?;
    let file: NetworkFile = serde_json::from_slice(&bytes)
        .map_err(|e| Error::Configuration(format!("parsing network file: {e}")))?;
    let tn = file
        .into_network()
        .map_err(|e| Error::Configuration(format!("invalid network: {e}")))?;
    Ok((tn, config_hash(&bytes)))
}

pub fn cmd_mincut(args: &MincutArgs) -> Result<i32> {
    let (tn, hash) = load_network(&args.network)?;
    let indices = parse_region(&args.region)?;
    let region = BoundaryRegion::new(indices.clone());
    region
        .check(tn.boundary_size())
        .map_err(|e| Error::Configuration(e.to_string()))?;
    let result = min_cut(&tn, &region)?;

    println!("region: {indices:?}");
    println!("min cut value: {}", result.value);
    let edge_names: Vec<String> = result.cut_edges.iter().map(|e| e.to_string()).collect();
    println!("cut edges: {}", edge_names.join(" "));

    let results = json!({
        "region": indices,
        "value": result.value,
        "cut_edges": edge_names,
    });
    write_report(
        &args.json,
        &RunReport::new("mincut", hash, None, results),
    )?;
    Ok(0)
}
