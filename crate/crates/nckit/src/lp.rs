//! Trace Lp theory: Schatten-type norms, Hölder duality, the Mazur map and
//! rearrangement step functions.
//!
//! At finite dimension `L_p(N, τ) = N` as a set; only the norm changes, so
//! elements stay plain [`AlgebraElement`]s and `p = ∞` means the operator
//! norm. The canonical (weight-independent) Lp space of the algebra is
//! realized as the pair `(N, ‖·‖_p)` against the canonical trace; the
//! represented trace gives the isometric multiplicity-weighted variant.

use crate::algebra::{polar_decompose, AlgebraElement, MatrixAlgebra};
use crate::error::Error;
use crate::la::{cr, herm_eig, svd, C64, CMat};
use crate::states::TraceFlavor;
use crate::tol::Tol;
use crate::Result;

/// A faithful normal trace: canonical (`w_k = 1`) or represented
/// (`w_k = m_k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceSpec {
    pub flavor: TraceFlavor,
}

impl TraceSpec {
    pub fn can() -> Self {
        TraceSpec { flavor: TraceFlavor::Can }
    }

    pub fn rep() -> Self {
        TraceSpec { flavor: TraceFlavor::Rep }
    }

    pub fn weight(&self, alg: &MatrixAlgebra, block: usize) -> f64 {
        self.flavor.weight(alg, block)
    }

    /// `τ(x)`.
    pub fn eval(&self, x: &AlgebraElement) -> C64 {
        match self.flavor {
            TraceFlavor::Can => x.trace_can(),
            TraceFlavor::Rep => x.trace_rep(),
        }
    }
}

/// Per-block singular values, descending within each block.
pub fn block_singular_values(x: &AlgebraElement) -> Vec<Vec<f64>> {
    x.blocks().iter().map(crate::la::singular_values).collect()
}

/// `‖x‖_p = τ(|x|^p)^{1/p}` for `p ≥ 1`; `p = ∞` gives the operator norm.
pub fn lp_norm(x: &AlgebraElement, p: f64, trace: &TraceSpec) -> Result<f64> {
    if p.is_infinite() && p > 0.0 {
        return Ok(x.operator_norm());
    }
    if !(p >= 1.0) {
        return Err(Error::BadExponent { p });
    }
    let mut total = 0.0;
    for (k, svals) in block_singular_values(x).iter().enumerate() {
        let w = trace.weight(x.algebra(), k);
        total += w * svals.iter().map(|s| s.powf(p)).sum::<f64>();
    }
    Ok(total.powf(1.0 / p))
}

/// Duality pairing `τ(xy)`.
pub fn duality_pair(x: &AlgebraElement, y: &AlgebraElement, trace: &TraceSpec) -> Result<C64> {
    if x.algebra() != y.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(trace.eval(&x.mul(y)))
}

/// The extremal dual element: `y` with `‖y‖_q = 1` and `τ(xy) = ‖x‖_p`
/// for `1/p + 1/q = 1`. Built from the singular value decomposition of the
/// blocks of `x`; requires `x ≠ 0`.
pub fn holder_extremal(
    x: &AlgebraElement,
    p: f64,
    trace: &TraceSpec,
    tol: &Tol,
) -> Result<AlgebraElement> {
    let norm_p = lp_norm(x, p, trace)?;
    if norm_p == 0.0 {
        return Err(Error::InvalidInput("extremal dual of the zero element".into()));
    }
    if p.is_infinite() {
        // rank-one dual at the top singular triple, weight-normalized
        let mut best: Option<(usize, f64)> = None;
        let bsv = block_singular_values(x);
        for (k, sv) in bsv.iter().enumerate() {
            if let Some(&s) = sv.first() {
                if best.is_none_or(|(_, b)| s > b) {
                    best = Some((k, s));
                }
            }
        }
        let (k, _) = best.unwrap();
        let (u, _, v) = svd(x.block(k));
        let w = trace.weight(x.algebra(), k);
        let mut y = AlgebraElement::zero(x.algebra().clone());
        let rank1 = v.column(0) * u.column(0).adjoint();
        y.blocks_mut()[k] = rank1 * cr(1.0 / w);
        return Ok(y);
    }
    if p == 1.0 {
        // y = v*, so that τ(xv*) = τ(|x|) and ‖y‖_∞ = 1
        let (v, _) = polar_decompose(x, tol);
        return Ok(v.adjoint());
    }
    // 1 < p < ∞: y = |x|^{p-1} v* / ‖x‖_p^{p-1} = V Σ^{p-1} U† / ‖x‖_p^{p-1}
    let scale = norm_p.powf(p - 1.0);
    let blocks = x
        .blocks()
        .iter()
        .map(|b| {
            let n = b.nrows();
            let (u, s, v) = svd(b);
            let mut out = CMat::zeros(n, n);
            for (i, &si) in s.iter().enumerate() {
                if si > 0.0 {
                    out += v.column(i) * u.column(i).adjoint() * cr(si.powf(p - 1.0) / scale);
                }
            }
            out
        })
        .collect();
    AlgebraElement::new(x.algebra().clone(), blocks)
}

/// Mazur map `x ↦ x^p` on positive elements via spectral calculus,
/// `p > 0`. Eigenvalues clamped at zero before the power.
pub fn mazur(x: &AlgebraElement, p: f64, tol: &Tol) -> Result<AlgebraElement> {
    if !(p > 0.0) {
        return Err(Error::InvalidInput(format!("Mazur exponent must be > 0, got {p}")));
    }
    let defect = x.hermiticity_defect();
    if defect > tol.spec {
        return Err(Error::NotHermitian { residual: defect });
    }
    let min = x.min_eigenvalue();
    if min < -tol.spec * x.operator_norm().max(1e-300) {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(x.map_blocks(|b| crate::la::herm_fn(b, |lam| cr(lam.max(0.0).powf(p)))))
}

/// Nonincreasing right-continuous step function on `[0, ∞)`: the
/// generalized singular value function `μ_t(x)` relative to a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    /// `(width, value)` pairs, values strictly decreasing, widths > 0.
    steps: Vec<(f64, f64)>,
}

impl StepFunction {
    pub fn new(steps: Vec<(f64, f64)>) -> Result<Self> {
        for w in steps.windows(2) {
            if w[0].1 < w[1].1 {
                return Err(Error::InvalidInput("step values must be nonincreasing".into()));
            }
        }
        if steps.iter().any(|&(w, v)| w <= 0.0 || v < 0.0) {
            return Err(Error::InvalidInput("step widths must be positive".into()));
        }
        Ok(StepFunction { steps })
    }

    pub fn steps(&self) -> &[(f64, f64)] {
        &self.steps
    }

    /// Total width after which the function is zero.
    pub fn total_width(&self) -> f64 {
        self.steps.iter().map(|s| s.0).sum()
    }

    /// `μ_t`: the value at `t ≥ 0` (zero past the last step).
    pub fn value(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for &(w, v) in &self.steps {
            acc += w;
            if t < acc {
                return v;
            }
        }
        0.0
    }

    /// `∫_0^∞ f(μ_t) dt` for `f` with `f(0) = 0`: a finite sum.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.steps.iter().map(|&(w, v)| w * f(v)).sum()
    }
}

/// Rearrangement function of `x` relative to a trace: block singular
/// values above the support cut, each with the block's trace weight,
/// merged descending.
pub fn rearrangement(x: &AlgebraElement, trace: &TraceSpec, tol: &Tol) -> StepFunction {
    let smax = x.operator_norm();
    let cut = tol.supp * smax;
    let mut entries: Vec<(f64, f64)> = Vec::new(); // (value, width)
    for (k, sv) in block_singular_values(x).iter().enumerate() {
        let w = trace.weight(x.algebra(), k);
        for &s in sv {
            if s > cut {
                entries.push((s, w));
            }
        }
    }
    entries.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut steps: Vec<(f64, f64)> = Vec::new();
    for (v, w) in entries {
        match steps.last_mut() {
            Some(last) if last.1 == v => last.0 += w,
            _ => steps.push((w, v)),
        }
    }
    StepFunction { steps }
}

/// `f(|x|)` traced: `τ(f(|x|)) = Σ_k w_k Σ_i f(s_{k,i})` — the spectral
/// side of the rearrangement identity.
pub fn trace_of_singular_function(
    x: &AlgebraElement,
    trace: &TraceSpec,
    f: impl Fn(f64) -> f64,
) -> f64 {
    let mut total = 0.0;
    for (k, sv) in block_singular_values(x).iter().enumerate() {
        let w = trace.weight(x.algebra(), k);
        total += w * sv.iter().map(|&s| f(s)).sum::<f64>();
    }
    total
}

/// Spectral scale of a hermitian element: eigenvalues descending with the
/// trace weights (used by monotonicity tests).
pub fn eigenvalue_scale(x: &AlgebraElement, trace: &TraceSpec) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for (k, b) in x.blocks().iter().enumerate() {
        let w = trace.weight(x.algebra(), k);
        for lam in herm_eig(b).0 {
            out.push((lam, w));
        }
    }
    out.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    out
}
