//! Matrix exponential by Padé scaling and squaring (orders 3, 5, 7, 9, 13
//! with the usual backward-error thresholds), plus an eigendecomposition
//! route used for cross-checks.

use faer::linalg::solvers::Solve;
use faer::{c64, Mat, MatRef};

use crate::linalg::{identity, one_norm, CMat};
use crate::superop::{SuperopKind, Superoperator};
use crate::{Error, Result};

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.53939833006323e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const MAX_SQUARINGS: i32 = 64;

fn lincomb(terms: &[(f64, &CMat)], n: usize) -> CMat {
    let mut out = Mat::<c64>::zeros(n, n);
    for &(w, m) in terms {
        if w == 0.0 {
            continue;
        }
        for j in 0..n {
            let src = m.col_as_slice(j);
            for (o, x) in out.col_as_slice_mut(j).iter_mut().zip(src) {
                *o += x * w;
            }
        }
    }
    out
}

fn add_identity(m: &mut CMat, w: f64) {
    for i in 0..m.nrows() {
        m[(i, i)] += c64::new(w, 0.0);
    }
}

/// Returns `(U, V)` for the order-`m` diagonal Padé approximant, `m <= 9`.
fn pade_low(a: &CMat, powers: &[CMat], b: &[f64]) -> (CMat, CMat) {
    let n = a.nrows();
    // powers[k] holds A^{2(k+1)}.
    let odd: Vec<(f64, &CMat)> = powers.iter().enumerate().map(|(k, p)| (b[2 * k + 3], p)).collect();
    let even: Vec<(f64, &CMat)> = powers.iter().enumerate().map(|(k, p)| (b[2 * k + 2], p)).collect();
    let mut u_inner = lincomb(&odd, n);
    add_identity(&mut u_inner, b[1]);
    let mut v = lincomb(&even, n);
    add_identity(&mut v, b[0]);
    (a * &u_inner, v)
}

fn pade13(a: &CMat) -> (CMat, CMat) {
    let n = a.nrows();
    let b = &B13;
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_hi = lincomb(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)], n);
    let mut u_lo = lincomb(&[(b[7], &a6), (b[5], &a4), (b[3], &a2)], n);
    add_identity(&mut u_lo, b[1]);
    let mut u_inner = &a6 * &u_hi;
    u_inner += &u_lo;
    let u = a * &u_inner;
    let v_hi = lincomb(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)], n);
    let mut v_lo = lincomb(&[(b[6], &a6), (b[4], &a4), (b[2], &a2)], n);
    add_identity(&mut v_lo, b[0]);
    let mut v = &a6 * &v_hi;
    v += &v_lo;
    (u, v)
}

/// `exp(A)` for a square complex matrix.
pub fn expm(a: MatRef<'_, c64>) -> Result<CMat> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::ShapeMismatch { expected: "square matrix".into(), found: format!("{}x{}", n, a.ncols()) });
    }
    if n == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    let norm = one_norm(a);
    if !norm.is_finite() {
        return Err(Error::ScalingFailure { norm });
    }
    let a = a.to_owned();
    for &(m, theta) in &THETA {
        if norm <= theta {
            let b: &[f64] = match m {
                3 => &B3,
                5 => &B5,
                7 => &B7,
                _ => &B9,
            };
            let a2 = &a * &a;
            let mut powers = vec![a2];
            while powers.len() < (m - 1) / 2 {
                let next = powers.last().unwrap() * &powers[0];
                powers.push(next);
            }
            let (u, v) = pade_low(&a, &powers, b);
            return solve_pade(&u, &v);
        }
    }
    let s = (norm / THETA_13).log2().ceil().max(0.0) as i32;
    if s > MAX_SQUARINGS {
        return Err(Error::ScalingFailure { norm });
    }
    let scale = 0.5f64.powi(s);
    let scaled = lincomb(&[(scale, &a)], n);
    let (u, v) = pade13(&scaled);
    let mut x = solve_pade(&u, &v)?;
    for _ in 0..s {
        x = &x * &x;
    }
    if !x.as_ref().is_all_finite() {
        return Err(Error::ScalingFailure { norm });
    }
    Ok(x)
}

fn solve_pade(u: &CMat, v: &CMat) -> Result<CMat> {
    let n = u.nrows();
    let p = lincomb(&[(1.0, v), (-1.0, u)], n);
    let q = lincomb(&[(1.0, v), (1.0, u)], n);
    let x = p.partial_piv_lu().solve(&q);
    if !x.as_ref().is_all_finite() {
        return Err(Error::ScalingFailure { norm: one_norm(u.as_ref()) });
    }
    Ok(x)
}

/// `exp(A)` through `A = W diag(λ) W⁻¹`. Only accurate for well-conditioned
/// eigenvector matrices; used to validate [`expm`].
pub fn expm_eigen(a: MatRef<'_, c64>) -> Result<CMat> {
    let n = a.nrows();
    let evd = a
        .eigen()
        .map_err(|_| Error::Eigensolver { dim: n, max_abs: crate::linalg::max_abs(a) })?;
    let w = evd.U().to_owned();
    let s = evd.S().column_vector();
    let scaled = Mat::from_fn(n, n, |i, j| w[(i, j)] * s[j].exp());
    let lu = w.partial_piv_lu();
    // X W = scaled  <=>  Wᵀ Xᵀ = scaledᵀ
    let xt = lu.solve_transpose(scaled.transpose().to_owned());
    Ok(xt.transpose().to_owned())
}

/// `exp(t S)`. A Lindbladian exponentiates to a noise channel; any other
/// input gives a generic superoperator.
pub fn matrix_exponential(s: &Superoperator, t: f64) -> Result<Superoperator> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("time must be finite, got {t}")));
    }
    let kind = match s.kind() {
        SuperopKind::Lindbladian => SuperopKind::NoiseChannel,
        _ => SuperopKind::Generic,
    };
    if t == 0.0 {
        return Superoperator::new(s.dim(), identity(s.dim() * s.dim()), kind);
    }
    let scaled = lincomb(&[(t, s.matrix())], s.matrix().nrows());
    Superoperator::new(s.dim(), expm(scaled.as_ref())?, kind)
}
