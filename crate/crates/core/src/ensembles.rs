//! Seeded random-matrix ensembles: Ginibre, Haar unitaries and Kossakowski
//! matrices (Wishart-type for global noise, rotated positive diagonals for
//! local noise).

use std::sync::OnceLock;

use faer::{c64, Mat, Side};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{hermitian_part, hermiticity_defect, trace, CMat};
use crate::{Error, Result, RngSeed};

const HERMITIAN_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

/// Square complex Ginibre matrix: i.i.d. entries with real and imaginary
/// parts drawn from `N(0, 1/2)`, so `E|g|² = 1`.
pub fn sample_ginibre(order: usize, seed: RngSeed) -> Result<CMat> {
    if order == 0 {
        return Err(Error::InvalidDimension { dim: 0, reason: "Ginibre order must be >= 1" });
    }
    let mut rng = seed.rng();
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut g = Mat::<c64>::zeros(order, order);
    for j in 0..order {
        for i in 0..order {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            g[(i, j)] = c64::new(re * scale, im * scale);
        }
    }
    Ok(g)
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix.
///
/// Column `j` of `Q` is multiplied by the phase of `R[j, j]`; this makes the
/// factorization unique (positive diagonal in `R`) and the law of `Q` exactly
/// Haar.
pub fn sample_haar_unitary(dim: usize, seed: RngSeed) -> Result<CMat> {
    let z = sample_ginibre(dim, seed)?;
    let qr = z.qr();
    let mut q = qr.compute_Q();
    let r = qr.R();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// Hermitian positive-semidefinite coupling matrix of a Lindblad generator.
///
/// Positivity is certified at construction by a Cholesky factorization of
/// `K + 1e-10·1`. The eigendecomposition `K = W diag(λ) W†` is computed on
/// first use and cached.
#[derive(Clone, Debug)]
pub struct KossakowskiMatrix {
    matrix: CMat,
    spectral: OnceLock<(Vec<f64>, CMat)>,
}

impl KossakowskiMatrix {
    /// Validates hermiticity (1e-12) and positivity (eigenvalues >= -1e-10).
    pub fn new(matrix: CMat) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::ShapeMismatch {
                expected: "non-empty square matrix".into(),
                found: format!("{}x{}", matrix.nrows(), matrix.ncols()),
            });
        }
        let defect = hermiticity_defect(matrix.as_ref());
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidParameter(format!(
                "Kossakowski matrix not Hermitian (defect {defect:e})"
            )));
        }
        let matrix = hermitian_part(matrix.as_ref());
        let mut shifted = matrix.clone();
        for i in 0..shifted.nrows() {
            shifted[(i, i)] += c64::new(PSD_TOL, 0.0);
        }
        if shifted.llt(Side::Lower).is_err() {
            return Err(Error::InvalidParameter(
                "Kossakowski matrix not positive semidefinite (eigenvalue below -1e-10)".into(),
            ));
        }
        Ok(Self { matrix, spectral: OnceLock::new() })
    }

    pub fn zeros(order: usize) -> Self {
        let spectral = OnceLock::new();
        let _ = spectral.set((vec![0.0; order], Mat::identity(order, order)));
        Self { matrix: Mat::zeros(order, order), spectral }
    }

    pub fn order(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        trace(self.matrix.as_ref()).re
    }

    fn spectral(&self) -> &(Vec<f64>, CMat) {
        self.spectral.get_or_init(|| {
            let evd = self
                .matrix
                .self_adjoint_eigen(Side::Lower)
                .expect("Hermitian eigensolver failed on a validated Kossakowski matrix");
            let values = evd.S().column_vector().iter().map(|x| x.re).collect();
            (values, evd.U().to_owned())
        })
    }

    /// Eigenvalues in nondecreasing order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectral().0
    }

    /// Columns are the eigenvectors matching [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &CMat {
        &self.spectral().1
    }

    fn check_trace(&self, target: f64) -> Result<()> {
        let tr = self.trace();
        if (tr - target).abs() > TRACE_TOL {
            return Err(Error::InvalidParameter(format!("Kossakowski trace {tr} differs from {target}")));
        }
        Ok(())
    }
}

/// `K = N G†G / Tr(G†G)` with `G` Ginibre of order `N² - 1`.
pub fn sample_global_kossakowski(dim: usize, seed: RngSeed) -> Result<KossakowskiMatrix> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, reason: "need N >= 2" });
    }
    let g = sample_ginibre(dim * dim - 1, seed)?;
    let wishart = g.adjoint() * &g;
    let scale = dim as f64 / trace(wishart.as_ref()).re;
    let k = KossakowskiMatrix::new(hermitian_part((&wishart * faer::Scale(c64::new(scale, 0.0))).as_ref()))?;
    k.check_trace(dim as f64)?;
    Ok(k)
}

/// `K = Q† diag(p) Q` with `Q` Haar on `U(order)` and `p_i` i.i.d. uniform on
/// `(0, 1]`, rescaled so that `Tr K = normalization`.
pub fn sample_local_kossakowski(order: usize, normalization: f64, seed: RngSeed) -> Result<KossakowskiMatrix> {
    if order == 0 {
        return Err(Error::InvalidDimension { dim: 0, reason: "Kossakowski order must be >= 1" });
    }
    if !(normalization.is_finite() && normalization > 0.0) {
        return Err(Error::InvalidParameter(format!("normalization must be positive, got {normalization}")));
    }
    let q = sample_haar_unitary(order, seed.substream(0))?;
    let mut rng = seed.substream(1).rng();
    let mut p: Vec<f64> = (0..order).map(|_| 1.0 - rng.random::<f64>()).collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x *= normalization / total);
    // Q† diag(p) Q, built as (diag(√p) Q)† (diag(√p) Q).
    let scaled = Mat::from_fn(order, order, |i, j| q[(i, j)] * p[i].sqrt());
    let k = KossakowskiMatrix::new(hermitian_part((scaled.adjoint() * &scaled).as_ref()))?;
    k.check_trace(normalization)?;
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, unitarity_defect};

    #[test]
    fn ginibre_is_reproducible() {
        let a = sample_ginibre(16, RngSeed::new(5)).unwrap();
        let b = sample_ginibre(16, RngSeed::new(5)).unwrap();
        let c = sample_ginibre(16, RngSeed::new(6)).unwrap();
        assert_eq!(max_abs_diff(a.as_ref(), b.as_ref()), 0.0);
        assert!(max_abs_diff(a.as_ref(), c.as_ref()) > 0.1);
    }

    #[test]
    fn ginibre_rejects_empty() {
        assert!(sample_ginibre(0, RngSeed::new(1)).is_err());
    }

    #[test]
    fn global_kossakowski_invariants() {
        for s in 0..3 {
            let k = sample_global_kossakowski(8, RngSeed::new(s)).unwrap();
            assert_eq!(k.order(), 63);
            assert!((k.trace() - 8.0).abs() <= 1e-12);
            assert!(k.eigenvalues()[0] >= -1e-10);
            assert!(hermiticity_defect(k.matrix().as_ref()) <= 1e-12);
        }
    }

    #[test]
    fn local_kossakowski_invariants() {
        let k = sample_local_kossakowski(15, 32.0, RngSeed::new(9)).unwrap();
        assert!((k.trace() - 32.0).abs() <= 1e-10);
        assert!(k.eigenvalues()[0] > 0.0);
        assert!(hermiticity_defect(k.matrix().as_ref()) <= 1e-12);
    }

    #[test]
    fn local_kossakowski_scalar_case() {
        let k = sample_local_kossakowski(1, 8.0, RngSeed::new(2)).unwrap();
        assert!((k.matrix()[(0, 0)] - c64::new(8.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn local_kossakowski_spectrum_is_rescaled_diagonal() {
        let seed = RngSeed::new(21);
        let k = sample_local_kossakowski(6, 4.0, seed).unwrap();
        let mut rng = seed.substream(1).rng();
        let mut p: Vec<f64> = (0..6).map(|_| 1.0 - rng.random::<f64>()).collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x *= 4.0 / total);
        p.sort_by(f64::total_cmp);
        for (a, b) in k.eigenvalues().iter().zip(&p) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn haar_unitary_is_unitary() {
        for (n, s) in [(1, 0), (2, 1), (7, 2), (32, 3)] {
            let u = sample_haar_unitary(n, RngSeed::new(s)).unwrap();
            assert!(unitarity_defect(u.as_ref()) <= 1e-12);
            let det = u.as_ref().determinant();
            assert!((det.norm() - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn kossakowski_rejects_non_psd() {
        let mut m = Mat::<c64>::zeros(2, 2);
        m[(0, 0)] = c64::new(1.0, 0.0);
        m[(1, 1)] = c64::new(-0.5, 0.0);
        assert!(KossakowskiMatrix::new(m).is_err());
        let mut h = Mat::<c64>::zeros(2, 2);
        h[(0, 1)] = c64::new(1.0, 0.0);
        assert!(KossakowskiMatrix::new(h).is_err());
    }
}
