use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Hilbert-space dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: &'static str },

    #[error("invalid locality k_max={k_max} for {qubits} qubits (need 1 <= k_max <= L)")]
    InvalidLocality { k_max: usize, qubits: usize },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("matrix is not unitary (max |U†U - 1| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix exponential scaling failed (1-norm {norm:e})")]
    ScalingFailure { norm: f64 },

    #[error(
        "noisy channel is not invertible: condition estimate {condition:e} \
         (spectrum must lie on the punctured complex plane)"
    )]
    NonInvertibleChannel { condition: f64 },

    #[error("eigensolver failed to converge on a {dim}x{dim} matrix (max |entry| {max_abs:e})")]
    Eigensolver { dim: usize, max_abs: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("angular bin {bin} of {n_angles} holds no eigenvalues")]
    Binning { bin: usize, n_angles: usize },
}
