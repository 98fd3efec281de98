use std::fmt;

use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use crate::linalg::{identity, trace, CMat};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuperopKind {
    Lindbladian,
    NoiseChannel,
    FoldedUnitary,
    NoisyCircuit,
    Denoiser,
    Generic,
}

impl fmt::Display for SuperopKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Lindbladian => "lindbladian",
            Self::NoiseChannel => "noise-channel",
            Self::FoldedUnitary => "folded-unitary",
            Self::NoisyCircuit => "noisy-circuit",
            Self::Denoiser => "denoiser",
            Self::Generic => "generic",
        };
        f.write_str(s)
    }
}

/// Dense `N² × N²` matrix acting on row-stacked density matrices.
#[derive(Clone, Debug)]
pub struct Superoperator {
    dim: usize,
    matrix: CMat,
    kind: SuperopKind,
}

impl Superoperator {
    pub fn new(dim: usize, matrix: CMat, kind: SuperopKind) -> Result<Self> {
        let n2 = dim * dim;
        if dim == 0 || matrix.nrows() != n2 || matrix.ncols() != n2 {
            return Err(Error::ShapeMismatch {
                expected: format!("{n2}x{n2} for N={dim}"),
                found: format!("{}x{}", matrix.nrows(), matrix.ncols()),
            });
        }
        Ok(Self { dim, matrix, kind })
    }

    pub fn identity(dim: usize, kind: SuperopKind) -> Self {
        Self { dim, matrix: identity(dim * dim), kind }
    }

    pub fn zeros(dim: usize, kind: SuperopKind) -> Self {
        Self { dim, matrix: Mat::zeros(dim * dim, dim * dim), kind }
    }

    /// Hilbert-space dimension `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn kind(&self) -> SuperopKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: SuperopKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn trace(&self) -> c64 {
        trace(self.matrix.as_ref())
    }

    /// `max_j |(⟨⟨1| S)_j - ⟨⟨1|_j|`: zero for trace-preserving maps. For a
    /// Lindbladian the relevant target is zero; see
    /// [`Self::trace_annihilation_defect`].
    pub fn trace_preservation_defect(&self) -> f64 {
        self.flat_row_defect(1.0)
    }

    /// `max_j |(⟨⟨1| S)_j|`: zero for generators of trace-preserving semigroups.
    pub fn trace_annihilation_defect(&self) -> f64 {
        self.flat_row_defect(0.0)
    }

    fn flat_row_defect(&self, target: f64) -> f64 {
        let n = self.dim;
        let m = &self.matrix;
        let mut worst = 0.0f64;
        for j in 0..n * n {
            let row: c64 = (0..n).map(|a| m[(a * n + a, j)]).sum();
            let want = if j % (n + 1) == 0 { target } else { 0.0 };
            worst = worst.max((row - c64::new(want, 0.0)).norm());
        }
        worst
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &Superoperator, kind: SuperopKind) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::ShapeMismatch {
                expected: format!("N={}", self.dim),
                found: format!("N={}", other.dim),
            });
        }
        Ok(Self { dim: self.dim, matrix: &self.matrix * &other.matrix, kind })
    }
}
