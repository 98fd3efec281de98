//! Folded unitaries, noise channels and assembly of the noisy circuit
//! `Λ = N_m U_m ⋯ N_1 U_1` together with its noiseless target `U_m ⋯ U_1`.

use serde::{Deserialize, Serialize};

use crate::basis::{build_pauli_basis, OperatorBasis};
use crate::ensembles::{sample_global_kossakowski, sample_haar_unitary, sample_local_kossakowski};
use crate::expm::matrix_exponential;
use crate::lindblad::{build_lindbladian, build_local_lindbladian};
use crate::linalg::{conj, identity, kron, kron_mul_left, unitarity_defect, CMat};
use crate::superop::{SuperopKind, Superoperator};
use crate::{Error, Result, RngSeed};

const UNITARY_TOL: f64 = 1e-10;

/// How `ρ ↦ U ρ U†` is written as an `N² × N²` matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FoldConvention {
    /// `U ⊗ U*`, the exact conjugation map under row-stacking.
    #[default]
    Conjugate,
    /// `U ⊗ Uᵀ`. Unitary and equidistributed with the above under Haar
    /// sampling, but not the map `ρ ↦ UρU†`.
    Transpose,
}

impl FoldConvention {
    /// `(A, B)` with folded unitary `A ⊗ B`.
    pub fn factors(self, u: &CMat) -> (CMat, CMat) {
        let second = match self {
            Self::Conjugate => conj(u.as_ref()),
            Self::Transpose => u.transpose().to_owned(),
        };
        (u.clone(), second)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NoiseKind {
    Global,
    Local { k_max: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    /// Hilbert-space dimension `N`.
    pub dim: usize,
    /// Number of layers `m`.
    pub layers: usize,
    /// Noise time `t` of every layer.
    pub t: f64,
    pub noise: NoiseKind,
    pub seed: RngSeed,
    #[serde(default)]
    pub fold: FoldConvention,
}

impl CircuitSpec {
    pub fn global(dim: usize, layers: usize, t: f64, seed: RngSeed) -> Self {
        Self { dim, layers, t, noise: NoiseKind::Global, seed, fold: FoldConvention::Conjugate }
    }

    /// Local noise on `qubits` qubits with jump operators of weight `<= k_max`.
    pub fn local(qubits: usize, k_max: usize, layers: usize, t: f64, seed: RngSeed) -> Self {
        let dim = 1usize.checked_shl(qubits as u32).unwrap_or(0);
        Self { dim, layers, t, noise: NoiseKind::Local { k_max }, seed, fold: FoldConvention::Conjugate }
    }

    pub fn with_fold(mut self, fold: FoldConvention) -> Self {
        self.fold = fold;
        self
    }

    /// `log2 N` when `N` is a power of two.
    pub fn qubits(&self) -> Option<usize> {
        self.dim.is_power_of_two().then(|| self.dim.trailing_zeros() as usize)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidDimension { dim: self.dim, reason: "need N >= 2" });
        }
        if self.layers == 0 {
            return Err(Error::InvalidParameter("circuit needs at least one layer".into()));
        }
        if !(self.t.is_finite() && self.t >= 0.0) {
            return Err(Error::InvalidParameter(format!("noise time must be finite and >= 0, got {}", self.t)));
        }
        if let NoiseKind::Local { k_max } = self.noise {
            let qubits = self
                .qubits()
                .ok_or(Error::InvalidDimension { dim: self.dim, reason: "local noise needs N = 2^L" })?;
            if k_max == 0 || k_max > qubits {
                return Err(Error::InvalidLocality { k_max, qubits });
            }
        }
        Ok(())
    }

    fn basis(&self) -> Result<OperatorBasis> {
        match self.noise {
            NoiseKind::Global => OperatorBasis::gell_mann(self.dim),
            NoiseKind::Local { k_max } => build_pauli_basis(self.qubits().unwrap_or(0), k_max),
        }
    }
}

/// Superoperator of `ρ ↦ U ρ U†` in the given convention.
pub fn fold_unitary(u: &CMat, fold: FoldConvention) -> Result<Superoperator> {
    let n = u.nrows();
    if u.ncols() != n || n == 0 {
        return Err(Error::ShapeMismatch {
            expected: "non-empty square unitary".into(),
            found: format!("{}x{}", u.nrows(), u.ncols()),
        });
    }
    let deviation = unitarity_defect(u.as_ref());
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let (a, b) = fold.factors(u);
    Superoperator::new(n, kron(a.as_ref(), b.as_ref()), SuperopKind::FoldedUnitary)
}

#[derive(Clone, Debug)]
pub struct Layer {
    pub unitary: CMat,
    pub folded: Superoperator,
    pub lindbladian: Superoperator,
    pub channel: Superoperator,
}

#[derive(Clone, Debug)]
pub struct NoisyCircuit {
    pub spec: CircuitSpec,
    pub layers: Vec<Layer>,
    /// `Λ = N_m U_m ⋯ N_1 U_1`.
    pub noisy: Superoperator,
    /// `U = U_m ⋯ U_1`.
    pub target: Superoperator,
}

impl NoisyCircuit {
    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    /// Kronecker factors `(A, B)` of `U_hi ⋯ U_lo` (layers `lo..hi`, 0-based,
    /// `hi` exclusive); the identity when the range is empty.
    pub fn folded_range_factors(&self, lo: usize, hi: usize) -> (CMat, CMat) {
        let n = self.dim();
        let (mut a, mut b) = (identity(n), identity(n));
        for layer in &self.layers[lo..hi] {
            let (la, lb) = self.spec.fold.factors(&layer.unitary);
            a = &la * &a;
            b = &lb * &b;
        }
        (a, b)
    }

    /// Recomputes `Λ` by explicit dense multiplication of the stored layers.
    pub fn remultiply(&self) -> CMat {
        let mut acc = identity(self.dim() * self.dim());
        for layer in &self.layers {
            acc = layer.folded.matrix() * &acc;
            acc = layer.channel.matrix() * &acc;
        }
        acc
    }
}

/// Samples and assembles a noisy circuit.
///
/// Layer `i` draws from `seed.substream(i)`: its Haar unitary from substream
/// 0 and its Kossakowski matrix from substream 1 of that.
pub fn assemble_noisy_circuit(spec: &CircuitSpec) -> Result<NoisyCircuit> {
    spec.validate()?;
    let n = spec.dim;
    let basis = spec.basis()?;
    let mut layers = Vec::with_capacity(spec.layers);
    let mut noisy = identity(n * n);
    for i in 0..spec.layers {
        let layer_seed = spec.seed.substream(i as u64);
        let unitary = sample_haar_unitary(n, layer_seed.substream(0))?;
        let k_seed = layer_seed.substream(1);
        let lindbladian = match spec.noise {
            NoiseKind::Global => build_lindbladian(&sample_global_kossakowski(n, k_seed)?, &basis)?,
            NoiseKind::Local { .. } => {
                build_local_lindbladian(&sample_local_kossakowski(basis.len(), n as f64, k_seed)?, &basis)?
            }
        };
        let channel = matrix_exponential(&lindbladian, spec.t)?;
        let folded = fold_unitary(&unitary, spec.fold)?;
        let (a, b) = spec.fold.factors(&unitary);
        noisy = kron_mul_left(a.as_ref(), b.as_ref(), noisy.as_ref());
        noisy = channel.matrix() * &noisy;
        layers.push(Layer { unitary, folded, lindbladian, channel });
    }
    let mut circuit = NoisyCircuit {
        spec: spec.clone(),
        layers,
        noisy: Superoperator::new(n, noisy, SuperopKind::NoisyCircuit)?,
        target: Superoperator::identity(n, SuperopKind::FoldedUnitary),
    };
    let (a, b) = circuit.folded_range_factors(0, spec.layers);
    circuit.target = Superoperator::new(n, kron(a.as_ref(), b.as_ref()), SuperopKind::FoldedUnitary)?;
    Ok(circuit)
}
