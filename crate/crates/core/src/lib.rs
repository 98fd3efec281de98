//! Random noisy quantum circuits in the superoperator picture.
//!
//! A circuit of depth `m` on `L` qubits is modelled as
//! `Λ = N_m U_m ... N_1 U_1`, with Haar-random folded unitaries `U_i` and
//! noise channels `N_i = exp(t L_i)` generated by random Lindbladians. The
//! crate samples these circuits as dense `N² × N²` matrices (`N = 2^L`),
//! computes the denoiser `D = U Λ⁻¹` that undoes the noise, and provides the
//! spectral tooling used to study it: eigenvalues, nearest-eigenvalue
//! distances, empirical Lindblad contours and their image under the
//! denoiser map, decay-band clustering and Marchenko-Pastur sum bounds.
//!
//! Vectorization is row-stacking throughout: `X ρ Y` acts as `(X ⊗ Yᵀ)|ρ⟩⟩`.
//!
//! ```no_run
//! use denoiser_core::{assemble_noisy_circuit, compute_denoiser, eigenvalues, CircuitSpec, RngSeed};
//!
//! let spec = CircuitSpec::global(32, 2, 0.1, RngSeed::new(7));
//! let circuit = assemble_noisy_circuit(&spec)?;
//! let result = compute_denoiser(&circuit)?;
//! let spectrum = eigenvalues(&result.denoiser, "denoiser")?;
//! println!("mean log|λ| = {}", spectrum.mean_log_modulus());
//! # Ok::<(), denoiser_core::Error>(())
//! ```

pub mod basis;
pub mod channel;
pub mod denoiser;
pub mod ensembles;
mod error;
pub mod expm;
pub mod lindblad;
pub mod linalg;
pub mod rng;
pub mod spectra;
pub mod superop;

pub use basis::{build_full_basis, build_pauli_basis, pauli_weight, BasisKind, OperatorBasis, Pauli, PauliString};
pub use channel::{
    assemble_noisy_circuit, fold_unitary, CircuitSpec, FoldConvention, Layer, NoiseKind, NoisyCircuit,
};
pub use denoiser::{
    bch_linear_denoiser, bch_second_order_term, compute_denoiser, exact_denoiser, rotated_lindbladians,
    DenoiserResult,
};
pub use ensembles::{
    sample_ginibre, sample_global_kossakowski, sample_haar_unitary, sample_local_kossakowski, KossakowskiMatrix,
};
pub use error::{Error, Result};
pub use expm::{expm, matrix_exponential};
pub use lindblad::{build_lindbladian, build_lindbladian_diagonalized, build_local_lindbladian};
pub use linalg::CMat;
pub use rng::RngSeed;
pub use spectra::{
    decay_band_clusters, eigenvalues, empirical_lindblad_contour, kossakowski_sum_bounds, min_distance_profile,
    predict_denoiser_contour, symmetric_min_distance, Band, BandSummary, ContourPrediction, DecayScale,
    SpectrumParams, SpectrumSample,
};
pub use superop::{SuperopKind, Superoperator};

pub use faer::c64;
