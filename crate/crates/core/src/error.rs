use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument violates an operation's contract.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A value failed its structural invariants (norm, Hermiticity, trace, PSD).
    #[error("validation failed: {0}")]
    Validation(String),

    /// Bell post-selection on qubits `a`, `b` has zero probability.
    #[error("zero-probability Bell post-selection on qubits {a} and {b}")]
    PostselectImpossible { a: usize, b: usize },

    /// Contracting a network annihilated the state at the given link.
    #[error("contraction failed at link {link}: {detail}")]
    Contraction { link: usize, detail: String },

    /// The requested computation exceeds the supported problem size.
    #[error("unsupported scale: {0}")]
    UnsupportedScale(String),

    /// Bad or incomplete configuration data.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// Decoherence compensation produced a non-normalizable matrix.
    #[error("compensation failed: {0}")]
    Compensation(String),

    /// Internal invariant broken; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
