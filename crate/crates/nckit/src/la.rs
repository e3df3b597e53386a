//! Dense complex linear-algebra kernels shared by every module.
//!
//! Thin wrappers around nalgebra with deterministic ordering conventions:
//! hermitian eigenvalues and singular values always come out descending.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Hermitian eigendecomposition with eigenvalues sorted descending.
/// The input is symmetrized first; columns of the returned matrix are the
/// orthonormal eigenvectors in matching order.
pub fn herm_eig(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    if n == 0 {
        return (vec![], CMat::zeros(0, 0));
    }
    let sym = (a + a.adjoint()) * cr(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Singular value decomposition `x = u Σ v†` with singular values sorted
/// descending. Returns `(u, σ, v)` (note: `v`, not `v†`).
pub fn svd(x: &CMat) -> (CMat, Vec<f64>, CMat) {
    let (r, cdim) = x.shape();
    let k = r.min(cdim);
    if k == 0 {
        return (CMat::zeros(r, 0), vec![], CMat::zeros(cdim, 0));
    }
    let f = x.clone().svd(true, true);
    let u = f.u.unwrap();
    let vt = f.v_t.unwrap();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| f.singular_values[j].partial_cmp(&f.singular_values[i]).unwrap());
    let s: Vec<f64> = order.iter().map(|&i| f.singular_values[i]).collect();
    let mut us = CMat::zeros(r, k);
    let mut v = CMat::zeros(cdim, k);
    for (dst, &src) in order.iter().enumerate() {
        us.set_column(dst, &u.column(src));
        v.set_column(dst, &vt.row(src).adjoint());
    }
    (us, s, v)
}

/// Singular values only, descending.
pub fn singular_values(x: &CMat) -> Vec<f64> {
    let k = x.nrows().min(x.ncols());
    if k == 0 {
        return vec![];
    }
    let mut s: Vec<f64> = x.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Largest singular value.
pub fn op_norm(x: &CMat) -> f64 {
    singular_values(x).first().copied().unwrap_or(0.0)
}

/// `f` applied to a hermitian matrix through its spectrum.
pub fn herm_fn(a: &CMat, f: impl Fn(f64) -> C64) -> CMat {
    let (vals, u) = herm_eig(a);
    let n = a.nrows();
    let mut d = CMat::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = f(vals[i]);
    }
    &u * d * u.adjoint()
}

/// `f` applied to the spectrum above an absolute cut in magnitude;
/// eigenvalues at or below the cut map to zero. This is the
/// pseudo-function convention used for supports.
pub fn herm_fn_cut(a: &CMat, cut: f64, f: impl Fn(f64) -> C64) -> CMat {
    herm_fn(a, |lam| if lam.abs() > cut { f(lam) } else { cr(0.0) })
}

/// `f` applied to the strictly positive spectrum above the cut; everything
/// else (including residual negative roundoff) maps to zero. Complex
/// pseudo-powers and pseudo-inverses of PSD densities go through here so
/// `ln` never sees a nonpositive eigenvalue.
pub fn psd_fn_cut(h: &CMat, cut: f64, f: impl Fn(f64) -> C64) -> CMat {
    herm_fn(h, |lam| if lam > cut { f(lam) } else { cr(0.0) })
}

/// Principal complex power `λ^z = exp(z ln λ)` for `λ > 0`.
pub fn pow_z(lam: f64, z: C64) -> C64 {
    (z * lam.ln()).exp()
}

/// `h^z` for hermitian positive-semidefinite `h`, acting as zero on the
/// spectrum at or below `cut`.
pub fn psd_pow(h: &CMat, z: C64, cut: f64) -> CMat {
    psd_fn_cut(h, cut, |lam| pow_z(lam, z))
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Column-major vectorization, matching `vec(a x b) = (bᵀ ⊗ a) vec(x)`.
pub fn vec_mat(x: &CMat) -> Vec<C64> {
    x.as_slice().to_vec()
}

/// Inverse of [`vec_mat`] for an `n × n` matrix.
pub fn unvec(v: &[C64], n: usize) -> CMat {
    CMat::from_column_slice(n, n, v)
}

/// Hilbert–Schmidt inner product `tr(a† b)`.
pub fn hs_inner(a: &CMat, b: &CMat) -> C64 {
    (a.adjoint() * b).trace()
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn trace(a: &CMat) -> C64 {
    a.trace()
}
