//! Traceless orthonormal operator bases.
//!
//! Two constructions are provided: generalized Gell-Mann matrices spanning
//! the full traceless operator space (`N² - 1` elements) and normalized Pauli
//! strings restricted to Pauli weight `1..=k_max`. Both satisfy
//! `Tr F_l = 0` and `Tr(F_l F_k†) = δ_lk`.

use std::fmt;

use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use crate::linalg::CMat;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    /// Matrix element `⟨row| σ |col⟩` for single-qubit indices.
    fn entry(self, row: usize, col: usize) -> c64 {
        match (self, row, col) {
            (Pauli::I, r, c) if r == c => c64::new(1.0, 0.0),
            (Pauli::X, r, c) if r != c => c64::new(1.0, 0.0),
            (Pauli::Y, 0, 1) => c64::new(0.0, -1.0),
            (Pauli::Y, 1, 0) => c64::new(0.0, 1.0),
            (Pauli::Z, 0, 0) => c64::new(1.0, 0.0),
            (Pauli::Z, 1, 1) => c64::new(-1.0, 0.0),
            _ => c64::new(0.0, 0.0),
        }
    }

    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// One letter per qubit; qubit 0 is the leftmost (most significant) tensor
/// factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString(pub Vec<Pauli>);

impl PauliString {
    pub fn identity(qubits: usize) -> Self {
        Self(vec![Pauli::I; qubits])
    }

    pub fn qubits(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> usize {
        pauli_weight(&self.0)
    }

    /// Dense `2^L × 2^L` matrix of the string, scaled by `scale`.
    ///
    /// A Pauli string is a phased permutation: row `r` has its only nonzero
    /// entry in column `r ^ flip_mask`.
    pub fn to_matrix(&self, scale: f64) -> CMat {
        let l = self.qubits();
        let n = 1usize << l;
        let flip_mask = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, p)| p.flips())
            .fold(0usize, |mask, (q, _)| mask | (1 << (l - 1 - q)));
        let mut m = Mat::<c64>::zeros(n, n);
        for row in 0..n {
            let col = row ^ flip_mask;
            let mut value = c64::new(scale, 0.0);
            for (q, p) in self.0.iter().enumerate() {
                let shift = l - 1 - q;
                value *= p.entry((row >> shift) & 1, (col >> shift) & 1);
            }
            m[(row, col)] = value;
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{p}"))
    }
}

/// Number of non-identity factors.
pub fn pauli_weight(letters: &[Pauli]) -> usize {
    letters.iter().filter(|&&p| p != Pauli::I).count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisKind {
    Full,
    PauliLocal { qubits: usize, k_max: usize },
}

#[derive(Clone, Debug)]
pub struct OperatorBasis {
    dim: usize,
    kind: BasisKind,
    elements: Vec<CMat>,
    strings: Vec<PauliString>,
}

impl OperatorBasis {
    /// Generalized Gell-Mann basis for any `N >= 2`.
    ///
    /// Order: for each pair `j < k` the symmetric then the antisymmetric
    /// element, followed by the `N - 1` diagonal elements.
    pub fn gell_mann(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim, reason: "need N >= 2" });
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut elements = Vec::with_capacity(dim * dim - 1);
        for j in 0..dim {
            for k in (j + 1)..dim {
                let mut sym = Mat::<c64>::zeros(dim, dim);
                sym[(j, k)] = c64::new(s, 0.0);
                sym[(k, j)] = c64::new(s, 0.0);
                elements.push(sym);
                let mut anti = Mat::<c64>::zeros(dim, dim);
                anti[(j, k)] = c64::new(0.0, -s);
                anti[(k, j)] = c64::new(0.0, s);
                elements.push(anti);
            }
        }
        for l in 1..dim {
            let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
            let mut diag = Mat::<c64>::zeros(dim, dim);
            for i in 0..l {
                diag[(i, i)] = c64::new(norm, 0.0);
            }
            diag[(l, l)] = c64::new(-(l as f64) * norm, 0.0);
            elements.push(diag);
        }
        Ok(Self { dim, kind: BasisKind::Full, elements, strings: Vec::new() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    /// Pauli descriptors, empty for a Gell-Mann basis.
    pub fn pauli_strings(&self) -> &[PauliString] {
        &self.strings
    }

    pub fn weights(&self) -> Vec<usize> {
        self.strings.iter().map(PauliString::weight).collect()
    }

    /// `N² × d` matrix whose column `l` is `|F_l⟩⟩`.
    pub fn vectorized(&self) -> CMat {
        let n = self.dim;
        Mat::from_fn(n * n, self.len(), |row, l| self.elements[l][(row / n, row % n)])
    }

    /// Nonzero entries of each column of [`Self::vectorized`] as
    /// `(row, value)` pairs in increasing row order.
    pub fn vectorized_sparse(&self) -> Vec<Vec<(usize, c64)>> {
        let n = self.dim;
        self.elements
            .iter()
            .map(|f| {
                let mut col = Vec::new();
                for a in 0..n {
                    for b in 0..n {
                        let v = f[(a, b)];
                        if v != c64::new(0.0, 0.0) {
                            col.push((a * n + b, v));
                        }
                    }
                }
                col
            })
            .collect()
    }

    /// `G[l, k] = Tr(F_l F_k†)`.
    pub fn gram(&self) -> CMat {
        let v = self.vectorized();
        v.transpose() * v.conjugate()
    }
}

/// Full traceless basis for a register of qubits (`N` a power of two).
pub fn build_full_basis(dim: usize) -> Result<OperatorBasis> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, reason: "need N >= 2" });
    }
    if !dim.is_power_of_two() {
        return Err(Error::InvalidDimension { dim, reason: "N must be a power of two" });
    }
    OperatorBasis::gell_mann(dim)
}

/// All Pauli strings of weight `1..=k_max` on `qubits` qubits, each scaled by
/// `1/√N`.
///
/// Ordered weight-major; within a weight, support sets follow lexicographic
/// order of qubit positions and letters follow `X < Y < Z` lexicographically.
pub fn build_pauli_basis(qubits: usize, k_max: usize) -> Result<OperatorBasis> {
    if qubits == 0 || k_max == 0 || k_max > qubits {
        return Err(Error::InvalidLocality { k_max, qubits });
    }
    if qubits >= usize::BITS as usize / 2 {
        return Err(Error::InvalidDimension { dim: usize::MAX, reason: "too many qubits" });
    }
    let dim = 1usize << qubits;
    let scale = 1.0 / (dim as f64).sqrt();
    let mut strings = Vec::new();
    for weight in 1..=k_max {
        for support in combinations(qubits, weight) {
            for letters in letter_assignments(weight) {
                let mut s = PauliString::identity(qubits);
                for (&q, &p) in support.iter().zip(&letters) {
                    s.0[q] = p;
                }
                strings.push(s);
            }
        }
    }
    let elements = strings.iter().map(|s| s.to_matrix(scale)).collect();
    Ok(OperatorBasis { dim, kind: BasisKind::PauliLocal { qubits, k_max }, elements, strings })
}

/// `N_L = Σ_{k=1}^{k_max} C(L, k) 3^k`.
pub fn local_basis_size(qubits: usize, k_max: usize) -> usize {
    (1..=k_max.min(qubits)).map(|k| binomial(qubits, k) * 3usize.pow(k as u32)).sum()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn letter_assignments(k: usize) -> Vec<Vec<Pauli>> {
    (0..3usize.pow(k as u32))
        .map(|mut code| {
            let mut letters = vec![Pauli::X; k];
            for slot in letters.iter_mut().rev() {
                *slot = Pauli::NON_IDENTITY[code % 3];
                code /= 3;
            }
            letters
        })
        .collect()
}
