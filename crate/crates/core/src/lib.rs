//! Classical toolkit for perfect-tensor networks and their holographic
//! entanglement entropies, plus an NMR-style decoherence pipeline.

pub mod circuits;
pub mod error;
pub mod mincut;
pub mod nmr;
pub mod qmath;
pub mod stabilizer;
pub mod tensornet;

pub use error::{Error, Result};
