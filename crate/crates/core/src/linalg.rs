//! Dense complex helpers on top of faer.

use faer::linalg::matmul::matmul;
use faer::{c64, Accum, Mat, MatMut, MatRef, Par};

/// Dense column-major complex matrix.
pub type CMat = Mat<c64>;

/// Sets the number of threads dense kernels may use; `1` runs them
/// sequentially and `0` lets the thread pool decide.
pub fn set_kernel_threads(threads: usize) {
    let par = if threads == 1 { Par::Seq } else { Par::rayon(threads) };
    faer::set_global_parallelism(par);
}

pub fn identity(n: usize) -> CMat {
    Mat::identity(n, n)
}

pub fn trace(m: MatRef<'_, c64>) -> c64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

pub fn max_abs(m: MatRef<'_, c64>) -> f64 {
    let mut out = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            out = out.max(m[(i, j)].norm());
        }
    }
    out
}

/// Operator 1-norm (maximum absolute column sum).
pub fn one_norm(m: MatRef<'_, c64>) -> f64 {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> f64 {
    assert_eq!((a.nrows(), a.ncols()), (b.nrows(), b.ncols()));
    let mut out = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            out = out.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    out
}

/// `max |U†U - 1|`.
pub fn unitarity_defect(u: MatRef<'_, c64>) -> f64 {
    let gram = u.adjoint() * u;
    max_abs_diff(gram.as_ref(), identity(u.ncols()).as_ref())
}

pub fn hermiticity_defect(m: MatRef<'_, c64>) -> f64 {
    max_abs_diff(m, m.adjoint().to_owned().as_ref())
}

/// `(M + M†) / 2`.
pub fn hermitian_part(m: MatRef<'_, c64>) -> CMat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

pub fn conj(m: MatRef<'_, c64>) -> CMat {
    m.conjugate().to_owned()
}

pub fn kron(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> CMat {
    let (ar, ac, br, bc) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    Mat::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// `(A ⊗ B) X` without forming the Kronecker product.
///
/// Each column of `X` is read as a row-stacked `na × nb` matrix `M` and
/// mapped to `A M Bᵀ`, which costs `O(na nb (na + nb))` per column instead
/// of `O(na² nb²)`.
pub fn kron_mul_left(a: MatRef<'_, c64>, b: MatRef<'_, c64>, x: MatRef<'_, c64>) -> CMat {
    let (na, nb) = (a.nrows(), b.nrows());
    assert_eq!(a.ncols(), na);
    assert_eq!(b.ncols(), nb);
    assert_eq!(x.nrows(), na * nb);
    let x = x.to_owned();
    let mut y = Mat::<c64>::zeros(na * nb, x.ncols());
    let mut tmp = Mat::<c64>::zeros(na, nb);
    for j in 0..x.ncols() {
        let block = MatRef::from_row_major_slice(x.col_as_slice(j), na, nb);
        matmul(tmp.as_mut(), Accum::Replace, a, block, c64::new(1.0, 0.0), Par::Seq);
        let out = MatMut::from_row_major_slice_mut(y.col_as_slice_mut(j), na, nb);
        matmul(out, Accum::Replace, tmp.as_ref(), b.transpose(), c64::new(1.0, 0.0), Par::Seq);
    }
    y
}

/// `W X W†` with `W = A ⊗ B`.
pub fn kron_conjugate(a: MatRef<'_, c64>, b: MatRef<'_, c64>, x: MatRef<'_, c64>) -> CMat {
    let left = kron_mul_left(a, b, x);
    let both = kron_mul_left(a, b, left.adjoint().to_owned().as_ref());
    both.adjoint().to_owned()
}

/// Row-stacked vectorization `|ρ⟩⟩`, index `a * N + b` holds `ρ[a, b]`.
pub fn vectorize(rho: MatRef<'_, c64>) -> Mat<c64> {
    let (r, c) = (rho.nrows(), rho.ncols());
    Mat::from_fn(r * c, 1, |k, _| rho[(k / c, k % c)])
}

pub fn unvectorize(v: MatRef<'_, c64>, n: usize) -> CMat {
    assert_eq!(v.nrows(), n * n);
    Mat::from_fn(n, n, |a, b| v[(a * n + b, 0)])
}
