//! Run reports: a deterministic JSON payload keyed by command, config hash,
//! and seed. Payload bytes are reproducible for identical inputs; wall-clock
//! information goes to stderr only.

use std::path::Path;

use holo_ee_core::qmath::DensityMatrix;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub config_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub results: Value,
}

impl RunReport {
    pub fn new(command: &str, config_hash: String, seed: Option<u64>, results: Value) -> Self {
        Self {
            command: command.to_string(),
            config_hash,
            seed,
            results,
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json_string())
    }
}

/// SHA-256 hex digest of the canonical configuration bytes for a run.
pub fn config_hash(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hex::encode(hasher.finalize())
}

/// JSON form of a density matrix: real and imaginary parts as row-major
/// nested arrays.
#[derive(Debug, Serialize)]
pub struct DensityMatrixJson {
    pub n_qubits: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl DensityMatrixJson {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let dim = rho.dim();
        let mut re = vec![vec![0.0; dim]; dim];
        let mut im = vec![vec![0.0; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let z = rho.entry(i, j);
                re[i][j] = z.re;
                im[i][j] = z.im;
            }
        }
        Self {
            n_qubits: rho.n_qubits(),
            re,
            im,
        }
    }
}
