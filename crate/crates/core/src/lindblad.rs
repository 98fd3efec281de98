//! Dense Lindblad superoperators
//!
//! ```text
//! ℒ = Σ_{k,l} K_{kl} [ F_l ⊗ F_k* − ½ (F_k†F_l ⊗ 1 + 1 ⊗ F_lᵀ F_k*) ]
//! ```
//!
//! All three builders share one kernel. With `V` the `N² × d` matrix whose
//! column `l` is `|F_l⟩⟩`, the jump part is a reshuffle of `R = V Kᵀ V†`:
//! `(F_l ⊗ F_k*)[(a,c),(b,d)] = F_l[a,b] conj(F_k[c,d])`. The anticommutator
//! needs `A = Σ K_{kl} F_k†F_l`, which is a partial trace of the same `R`:
//! `A[i,m] = Σ_j R[(j,m),(j,i)]`.

use faer::{c64, Mat};

use crate::basis::{BasisKind, OperatorBasis};
use crate::ensembles::KossakowskiMatrix;
use crate::linalg::{conj, CMat};
use crate::superop::{SuperopKind, Superoperator};
use crate::{Error, Result};

fn check_shapes(k: &KossakowskiMatrix, basis: &OperatorBasis) -> Result<()> {
    if k.order() != basis.len() {
        return Err(Error::ShapeMismatch {
            expected: format!("Kossakowski order {} (basis size)", basis.len()),
            found: format!("order {}", k.order()),
        });
    }
    Ok(())
}

/// Raw construction: forms `R = V Kᵀ V†` with the full coupling matrix.
///
/// Both basis families are sparse (a Gell-Mann element has at most `N`
/// nonzeros, a Pauli string exactly `N`), so the two products run over the
/// nonzeros of `V` only.
pub fn build_lindbladian(k: &KossakowskiMatrix, basis: &OperatorBasis) -> Result<Superoperator> {
    check_shapes(k, basis)?;
    let n2 = basis.dim() * basis.dim();
    let d = basis.len();
    let cols = basis.vectorized_sparse();
    let km = k.matrix();
    // Xᵀ = K Vᵀ, i.e. column p of Xᵀ is Σ_l V[p,l] K[:,l].
    let mut xt = Mat::<c64>::zeros(d, n2);
    for (l, col) in cols.iter().enumerate() {
        let kcol = km.col(l);
        for &(p, v) in col {
            let mut dst = xt.col_mut(p);
            for i in 0..d {
                dst[i] += kcol[i] * v;
            }
        }
    }
    // R = X V†: column y of R is Σ_k conj(V[y,k]) X[:,k].
    let x = xt.transpose().to_owned();
    let mut r = Mat::<c64>::zeros(n2, n2);
    for (kk, col) in cols.iter().enumerate() {
        let xcol = x.col(kk);
        for &(y, v) in col {
            let w = v.conj();
            let mut dst = r.col_mut(y);
            for i in 0..n2 {
                dst[i] += xcol[i] * w;
            }
        }
    }
    assemble(basis.dim(), &r)
}

/// Diagonalized construction: with `K = W diag(λ) W†` the rotated jump
/// operators `F_μ = Σ_n conj(W[n,μ]) F_n` give `R = Σ_μ λ_μ |F_μ⟩⟩⟨⟨F_μ|`,
/// i.e. `d` rank-one dissipators instead of `d²` cross terms.
pub fn build_lindbladian_diagonalized(k: &KossakowskiMatrix, basis: &OperatorBasis) -> Result<Superoperator> {
    check_shapes(k, basis)?;
    let v = basis.vectorized();
    let jumps = &v * conj(k.eigenvectors().as_ref());
    let lambda = k.eigenvalues();
    let weighted = Mat::from_fn(jumps.nrows(), jumps.ncols(), |i, mu| jumps[(i, mu)] * lambda[mu]);
    let r = &weighted * jumps.adjoint();
    assemble(basis.dim(), &r)
}

/// Lindbladian over a Pauli-string basis of bounded weight.
pub fn build_local_lindbladian(k: &KossakowskiMatrix, basis: &OperatorBasis) -> Result<Superoperator> {
    if !matches!(basis.kind(), BasisKind::PauliLocal { .. }) {
        return Err(Error::InvalidParameter("local Lindbladian needs a Pauli-local basis".into()));
    }
    build_lindbladian(k, basis)
}

fn assemble(n: usize, r: &CMat) -> Result<Superoperator> {
    let mut a = Mat::<c64>::zeros(n, n);
    for i in 0..n {
        for m in 0..n {
            a[(i, m)] = (0..n).map(|j| r[(j * n + m, j * n + i)]).sum();
        }
    }
    let half = c64::new(0.5, 0.0);
    let mut s = Mat::<c64>::zeros(n * n, n * n);
    for b in 0..n {
        for d in 0..n {
            let col = b * n + d;
            for a_ in 0..n {
                let row_r = a_ * n + b;
                for c in 0..n {
                    s[(a_ * n + c, col)] = r[(row_r, c * n + d)];
                }
            }
        }
    }
    for a_ in 0..n {
        for b in 0..n {
            let coef = a[(a_, b)] * half;
            for c in 0..n {
                s[(a_ * n + c, b * n + c)] -= coef;
            }
        }
    }
    for a_ in 0..n {
        for d in 0..n {
            for c in 0..n {
                s[(a_ * n + c, a_ * n + d)] -= a[(d, c)] * half;
            }
        }
    }
    Superoperator::new(n, s, SuperopKind::Lindbladian)
}
