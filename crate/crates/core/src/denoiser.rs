//! The denoiser `D = U Λ⁻¹`, rotated Lindbladians and the first-order BCH
//! approximation `D ≈ exp(−t Σ_i L̃_i)`.

use faer::linalg::solvers::Solve;
use faer::{c64, Mat, MatRef};

use crate::channel::NoisyCircuit;
use crate::expm::expm;
use crate::linalg::{kron_conjugate, max_abs, max_abs_diff, CMat};
use crate::superop::{SuperopKind, Superoperator};
use crate::{Error, Result};

/// Inverse condition numbers below this are treated as singular.
const INVERTIBILITY_THRESHOLD: f64 = 1e-12;
const POWER_ITERATIONS: usize = 40;

#[derive(Clone, Debug)]
pub struct DenoiserResult {
    /// Exact denoiser `D = U Λ⁻¹`.
    pub denoiser: Superoperator,
    /// Spectral condition number estimate `‖Λ‖₂ ‖Λ⁻¹‖₂`.
    pub condition: f64,
    /// `L̃_1, …, L̃_m` with `Λ = exp(t L̃_m) ⋯ exp(t L̃_1) U`.
    pub rotated: Vec<Superoperator>,
    /// `exp(−t Σ_i L̃_i)`.
    pub linear: Superoperator,
}

impl DenoiserResult {
    /// `‖D Λ − U‖_max / ‖D‖_max`.
    pub fn relation_defect(&self, circuit: &NoisyCircuit) -> f64 {
        relation_defect(self.denoiser.matrix(), circuit)
    }
}

fn relation_defect(d: &CMat, circuit: &NoisyCircuit) -> f64 {
    let prod = d * circuit.noisy.matrix();
    max_abs_diff(prod.as_ref(), circuit.target.matrix().as_ref()) / max_abs(d.as_ref())
}

/// Largest singular value by power iteration on `MᴴM`, with a fixed start
/// vector so results are reproducible. Converges from below.
fn spectral_norm(m: MatRef<'_, c64>) -> f64 {
    let n = m.ncols();
    let mut v = Mat::<c64>::from_fn(n, 1, |i, _| c64::new(1.0 + (i as f64 * 0.618_033_988_75).fract(), 0.0));
    let mut sigma = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let norm = v.norm_l2();
        if norm == 0.0 {
            return 0.0;
        }
        v *= faer::Scale(c64::new(1.0 / norm, 0.0));
        let w = m * &v;
        sigma = w.norm_l2();
        v = m.adjoint() * w;
    }
    sigma
}

/// `D = U Λ⁻¹` through an LU factorization of `Λ` (solving `Λᵀ Dᵀ = Uᵀ`)
/// and one step of iterative refinement. Also returns the condition estimate.
pub fn exact_denoiser(circuit: &NoisyCircuit) -> Result<(Superoperator, f64)> {
    let lambda = circuit.noisy.matrix();
    let target = circuit.target.matrix();
    let lu = lambda.partial_piv_lu();
    let mut d = lu.solve_transpose(target.transpose().to_owned()).transpose().to_owned();
    if !d.as_ref().is_all_finite() {
        return Err(Error::NonInvertibleChannel { condition: f64::INFINITY });
    }
    let residual = target - &d * lambda;
    let correction = lu.solve_transpose(residual.transpose().to_owned());
    d += correction.transpose();
    // U is unitary, so ‖Λ⁻¹‖₂ = ‖U† D‖₂ = ‖D‖₂.
    let condition = spectral_norm(lambda.as_ref()) * spectral_norm(d.as_ref());
    if !condition.is_finite() || condition * INVERTIBILITY_THRESHOLD > 1.0 {
        return Err(Error::NonInvertibleChannel { condition });
    }
    Ok((Superoperator::new(circuit.dim(), d, SuperopKind::Denoiser)?, condition))
}

/// `L̃_i = W_i L_i W_i†` with `W_i = U_m ⋯ U_{i+1}` (and `W_m = 1`), so that
/// `Λ = exp(t L̃_m) ⋯ exp(t L̃_1) U`.
pub fn rotated_lindbladians(circuit: &NoisyCircuit) -> Result<Vec<Superoperator>> {
    let m = circuit.layers.len();
    circuit
        .layers
        .iter()
        .enumerate()
        .map(|(i, layer)| {
            let (a, b) = circuit.folded_range_factors(i + 1, m);
            let rotated = kron_conjugate(a.as_ref(), b.as_ref(), layer.lindbladian.matrix().as_ref());
            Superoperator::new(circuit.dim(), rotated, SuperopKind::Lindbladian)
        })
        .collect()
}

fn sum_of(rotated: &[Superoperator]) -> Result<CMat> {
    let first = rotated.first().ok_or_else(|| Error::InvalidParameter("no rotated Lindbladians".into()))?;
    let mut acc = first.matrix().clone();
    for r in &rotated[1..] {
        if r.dim() != first.dim() {
            return Err(Error::ShapeMismatch { expected: format!("N={}", first.dim()), found: format!("N={}", r.dim()) });
        }
        acc += r.matrix();
    }
    Ok(acc)
}

/// `exp(−t Σ_i L̃_i)`.
pub fn bch_linear_denoiser(rotated: &[Superoperator], t: f64) -> Result<Superoperator> {
    let sum = sum_of(rotated)?;
    let exponent = sum * faer::Scale(c64::new(-t, 0.0));
    Superoperator::new(rotated[0].dim(), expm(exponent.as_ref())?, SuperopKind::Denoiser)
}

/// Second-order BCH exponent `(t²/2) Σ_{j>k} [L̃_j, L̃_k]` of
/// `exp(t L̃_m) ⋯ exp(t L̃_1)`; a diagnostic for the quality of the linear
/// approximation.
pub fn bch_second_order_term(rotated: &[Superoperator], t: f64) -> Result<Superoperator> {
    let first = rotated.first().ok_or_else(|| Error::InvalidParameter("no rotated Lindbladians".into()))?;
    let n2 = first.matrix().nrows();
    let mut acc = Mat::<c64>::zeros(n2, n2);
    let mut partial = Mat::<c64>::zeros(n2, n2);
    // Σ_{j>k} [L_j, L_k] = Σ_j [L_j, P_j] with P_j = Σ_{k<j} L_k.
    for (j, lj) in rotated.iter().enumerate() {
        if j > 0 {
            acc += lj.matrix() * &partial;
            acc -= &partial * lj.matrix();
        }
        partial += lj.matrix();
    }
    let scaled = acc * faer::Scale(c64::new(0.5 * t * t, 0.0));
    Superoperator::new(first.dim(), scaled, SuperopKind::Generic)
}

/// Exact denoiser, rotated Lindbladians and the linear BCH approximation.
pub fn compute_denoiser(circuit: &NoisyCircuit) -> Result<DenoiserResult> {
    let (denoiser, condition) = exact_denoiser(circuit)?;
    let rotated = rotated_lindbladians(circuit)?;
    let linear = bch_linear_denoiser(&rotated, circuit.spec.t)?;
    Ok(DenoiserResult { denoiser, condition, rotated, linear })
}
