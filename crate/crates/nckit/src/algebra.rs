//! Finite-dimensional W*-algebras as block matrix algebras.
//!
//! An algebra is `⊕_k M_{n_k}(C)`, represented on `⊕_k (C^{n_k} ⊗ C^{m_k})`
//! by `x ↦ ⊕_k (x_k ⊗ I_{m_k})`. Elements carry one complex `n_k × n_k`
//! matrix per block. Spectral calculus, polar decomposition, supports,
//! commutants, type classification and pinching expectations all live here.

use crate::error::Error;
use crate::la::{self, cr, herm_eig, identity, kron, op_norm, svd, unvec, C64, CMat};
use crate::tol::Tol;
use crate::Result;

/// Dimension and representation multiplicity of one matrix block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockDim {
    pub dim: usize,
    pub mult: usize,
}

/// Block-structure descriptor of a finite-dimensional W*-algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixAlgebra {
    blocks: Vec<BlockDim>,
}

impl MatrixAlgebra {
    /// Builds an algebra from `(dim, mult)` pairs.
    pub fn new(blocks: Vec<(usize, usize)>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidInput("algebra needs at least one block".into()));
        }
        if blocks.iter().any(|&(n, m)| n == 0 || m == 0) {
            return Err(Error::InvalidInput(
                "block dimensions and multiplicities must be >= 1".into(),
            ));
        }
        Ok(MatrixAlgebra {
            blocks: blocks.iter().map(|&(dim, mult)| BlockDim { dim, mult }).collect(),
        })
    }

    /// Single factor `M_n` with multiplicity one.
    pub fn factor(n: usize) -> Self {
        MatrixAlgebra::new(vec![(n, 1)]).unwrap()
    }

    pub fn blocks(&self) -> &[BlockDim] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Dimension of the representing Hilbert space `Σ n_k · m_k`.
    pub fn represented_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim * b.mult).sum()
    }

    /// Dimension of the Hilbert–Schmidt space `Σ n_k²`; equals the linear
    /// dimension of the algebra itself.
    pub fn hs_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim * b.dim).sum()
    }

    /// Commutant dimension of the represented algebra, `Σ m_k²`.
    pub fn commutant_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.mult * b.mult).sum()
    }

    pub fn is_commutative(&self) -> bool {
        self.blocks.iter().all(|b| b.dim == 1)
    }

    /// Enumerates all matrix units `e^{(k)}_{ij}` in block-major order.
    pub fn matrix_units(&self) -> Vec<AlgebraElement> {
        let mut units = Vec::with_capacity(self.hs_dim());
        for (k, b) in self.blocks.iter().enumerate() {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    units.push(AlgebraElement::matrix_unit(self.clone(), k, i, j));
                }
            }
        }
        units
    }
}

/// One complex matrix per block; the universal value type of the toolkit.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    algebra: MatrixAlgebra,
    blocks: Vec<CMat>,
}

impl AlgebraElement {
    pub fn new(algebra: MatrixAlgebra, blocks: Vec<CMat>) -> Result<Self> {
        if blocks.len() != algebra.num_blocks() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} blocks", algebra.num_blocks()),
                found: format!("{} blocks", blocks.len()),
            });
        }
        for (b, m) in algebra.blocks().iter().zip(&blocks) {
            if m.nrows() != b.dim || m.ncols() != b.dim {
                return Err(Error::DimensionMismatch {
                    expected: format!("{0}x{0}", b.dim),
                    found: format!("{}x{}", m.nrows(), m.ncols()),
                });
            }
        }
        Ok(AlgebraElement { algebra, blocks })
    }

    pub fn zero(algebra: MatrixAlgebra) -> Self {
        let blocks = algebra.blocks().iter().map(|b| CMat::zeros(b.dim, b.dim)).collect();
        AlgebraElement { algebra, blocks }
    }

    pub fn identity(algebra: MatrixAlgebra) -> Self {
        let blocks = algebra.blocks().iter().map(|b| identity(b.dim)).collect();
        AlgebraElement { algebra, blocks }
    }

    /// Matrix unit `e^{(k)}_{ij}`: zero everywhere except a single one.
    pub fn matrix_unit(algebra: MatrixAlgebra, block: usize, i: usize, j: usize) -> Self {
        let mut el = AlgebraElement::zero(algebra);
        el.blocks[block][(i, j)] = cr(1.0);
        el
    }

    /// Diagonal element from per-block real diagonals.
    pub fn from_diagonals(algebra: MatrixAlgebra, diags: &[Vec<f64>]) -> Result<Self> {
        let mut el = AlgebraElement::zero(algebra);
        if diags.len() != el.algebra.num_blocks() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} blocks", el.algebra.num_blocks()),
                found: format!("{} blocks", diags.len()),
            });
        }
        for (k, d) in diags.iter().enumerate() {
            if d.len() != el.algebra.blocks()[k].dim {
                return Err(Error::DimensionMismatch {
                    expected: format!("{}", el.algebra.blocks()[k].dim),
                    found: format!("{}", d.len()),
                });
            }
            for (i, &v) in d.iter().enumerate() {
                el.blocks[k][(i, i)] = cr(v);
            }
        }
        Ok(el)
    }

    pub fn algebra(&self) -> &MatrixAlgebra {
        &self.algebra
    }

    pub fn block(&self, k: usize) -> &CMat {
        &self.blocks[k]
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub(crate) fn blocks_mut(&mut self) -> &mut [CMat] {
        &mut self.blocks
    }

    pub fn into_blocks(self) -> Vec<CMat> {
        self.blocks
    }

    /// Applies `f` blockwise, preserving the algebra.
    pub fn map_blocks(&self, f: impl Fn(&CMat) -> CMat) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    fn zip_blocks(&self, other: &Self, f: impl Fn(&CMat, &CMat) -> CMat) -> Self {
        assert_eq!(self.algebra, other.algebra, "algebra mismatch in element arithmetic");
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_blocks(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_blocks(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_blocks(other, |a, b| a * b)
    }

    pub fn scale(&self, lambda: C64) -> Self {
        self.map_blocks(|b| b * lambda)
    }

    pub fn scale_re(&self, lambda: f64) -> Self {
        self.scale(cr(lambda))
    }

    pub fn adjoint(&self) -> Self {
        self.map_blocks(|b| b.adjoint())
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Canonical trace `Σ_k tr(x_k)` (multiplicity-free).
    pub fn trace_can(&self) -> C64 {
        self.blocks.iter().map(la::trace).sum()
    }

    /// Represented trace `Σ_k m_k tr(x_k)`.
    pub fn trace_rep(&self) -> C64 {
        self.blocks
            .iter()
            .zip(self.algebra.blocks())
            .map(|(m, b)| la::trace(m) * cr(b.mult as f64))
            .sum()
    }

    /// Hilbert–Schmidt inner product `Σ_k tr(x_k† y_k)`.
    pub fn hs_inner(&self, other: &Self) -> C64 {
        assert_eq!(self.algebra, other.algebra, "algebra mismatch in hs_inner");
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| la::hs_inner(a, b))
            .sum()
    }

    pub fn hs_norm(&self) -> f64 {
        self.hs_inner(self).re.max(0.0).sqrt()
    }

    /// C*-norm: `sqrt` of the largest eigenvalue of `x*x`, maximized over
    /// blocks.
    pub fn operator_norm(&self) -> f64 {
        self.blocks.iter().map(op_norm).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.operator_norm() <= tol
    }

    /// Hermiticity defect `‖x − x*‖ / max(‖x‖, 1e-300)`.
    pub fn hermiticity_defect(&self) -> f64 {
        let norm = self.operator_norm();
        if norm == 0.0 {
            return 0.0;
        }
        self.sub(&self.adjoint()).operator_norm() / norm
    }

    pub fn is_self_adjoint(&self, tol: &Tol) -> bool {
        self.hermiticity_defect() <= tol.spec
    }

    /// Positivity: hermitian with spectrum in `[-ε‖x‖, ∞)`.
    pub fn is_positive(&self, tol: &Tol) -> bool {
        if !self.is_self_adjoint(tol) {
            return false;
        }
        let norm = self.operator_norm();
        if norm == 0.0 {
            return true;
        }
        self.blocks
            .iter()
            .all(|b| herm_eig(b).0.last().copied().unwrap_or(0.0) >= -tol.spec * norm)
    }

    pub fn is_projection(&self, tol: &Tol) -> bool {
        let idem = self.mul(self).sub(self).operator_norm();
        self.sub(&self.adjoint()).operator_norm() <= tol.spec && idem <= tol.spec
    }

    pub fn is_partial_isometry(&self, tol: &Tol) -> bool {
        self.adjoint().mul(self).is_projection(tol)
    }

    pub fn is_unitary(&self, tol: &Tol) -> bool {
        let id = AlgebraElement::identity(self.algebra.clone());
        self.adjoint().mul(self).sub(&id).operator_norm() <= tol.spec
            && self.mul(&self.adjoint()).sub(&id).operator_norm() <= tol.spec
    }

    /// Minimal eigenvalue across blocks (hermitian input assumed).
    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| herm_eig(b).0.last().copied().unwrap_or(f64::INFINITY))
            .fold(f64::INFINITY, f64::min)
    }

    /// The represented operator `⊕_k (x_k ⊗ I_{m_k})` on `C^d`,
    /// `d = Σ n_k m_k`.
    pub fn represent(&self) -> CMat {
        let d = self.algebra.represented_dim();
        let mut out = CMat::zeros(d, d);
        let mut off = 0;
        for (m, b) in self.blocks.iter().zip(self.algebra.blocks()) {
            let rep = kron(m, &identity(b.mult));
            let s = b.dim * b.mult;
            out.view_mut((off, off), (s, s)).copy_from(&rep);
            off += s;
        }
        out
    }

    /// Support projection of a self-adjoint element: spectral projection
    /// onto `|λ| > ε_supp · ‖a‖`.
    pub fn support_projection(&self, tol: &Tol) -> Result<AlgebraElement> {
        let defect = self.hermiticity_defect();
        if defect > tol.spec {
            return Err(Error::NotHermitian { residual: defect });
        }
        let cut = tol.supp * self.operator_norm();
        Ok(self.map_blocks(|b| la::herm_fn_cut(b, cut, |_| cr(1.0))))
    }
}

impl std::ops::Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::add(self, rhs)
    }
}

impl std::ops::Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::sub(self, rhs)
    }
}

impl std::ops::Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::mul(self, rhs)
    }
}

impl std::ops::Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(cr(-1.0))
    }
}

/// Spectral decomposition of a self-adjoint element: clustered eigenvalues
/// (descending) with orthogonal spectral projections summing to the
/// identity.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub projectors: Vec<AlgebraElement>,
}

impl SpectralData {
    /// `Σ λ_i P_i`.
    pub fn reconstruct(&self) -> AlgebraElement {
        let alg = self.projectors[0].algebra().clone();
        let mut out = AlgebraElement::zero(alg);
        for (lam, p) in self.eigenvalues.iter().zip(&self.projectors) {
            out = out.add(&p.scale_re(*lam));
        }
        out
    }
}

/// Spectral decomposition with eigenvalue clustering. Eigenvalues closer
/// than `ε_cluster · ‖a‖` merge into a single projector; clusters are
/// ordered descending, ties resolved by first occurrence.
pub fn spectral_decompose(a: &AlgebraElement, tol: &Tol) -> Result<SpectralData> {
    let defect = a.hermiticity_defect();
    if defect > tol.spec {
        return Err(Error::NotHermitian { residual: defect });
    }
    // (eigenvalue, block, eigenvector) across all blocks
    let mut entries: Vec<(f64, usize, nalgebra::DVector<C64>)> = Vec::new();
    for (k, b) in a.blocks().iter().enumerate() {
        let (vals, vecs) = herm_eig(b);
        for (i, &lam) in vals.iter().enumerate() {
            entries.push((lam, k, vecs.column(i).clone_owned()));
        }
    }
    entries.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let scale = a.operator_norm();
    let gap = tol.cluster * scale.max(f64::MIN_POSITIVE);

    let mut eigenvalues = Vec::new();
    let mut multiplicities = Vec::new();
    let mut projectors = Vec::new();
    let mut idx = 0;
    while idx < entries.len() {
        let mut end = idx + 1;
        while end < entries.len() && entries[end - 1].0 - entries[end].0 < gap {
            end += 1;
        }
        let cluster = &entries[idx..end];
        let lam = cluster.iter().map(|e| e.0).sum::<f64>() / cluster.len() as f64;
        let mut proj = AlgebraElement::zero(a.algebra().clone());
        for (_, k, v) in cluster {
            let outer = v * v.adjoint();
            proj.blocks[*k] += outer;
        }
        eigenvalues.push(lam);
        multiplicities.push(cluster.len());
        projectors.push(proj);
        idx = end;
    }
    Ok(SpectralData {
        eigenvalues,
        multiplicities,
        projectors,
    })
}

/// Polar decomposition `x = v |x|` with `|x| = (x*x)^{1/2}`, `v*v =
/// supp(|x|)` and `vv* = supp(|x*|)`. The zero element returns `(0, 0)`.
pub fn polar_decompose(x: &AlgebraElement, tol: &Tol) -> (AlgebraElement, AlgebraElement) {
    let smax = x.operator_norm();
    let cut = tol.supp * smax;
    let mut v_blocks = Vec::with_capacity(x.blocks().len());
    let mut abs_blocks = Vec::with_capacity(x.blocks().len());
    for b in x.blocks() {
        let n = b.nrows();
        let (u, s, v) = svd(b);
        let mut absx = CMat::zeros(n, n);
        let mut iso = CMat::zeros(n, n);
        for (i, &si) in s.iter().enumerate() {
            let vi = v.column(i);
            absx += vi * vi.adjoint() * cr(si);
            if si > cut {
                iso += u.column(i) * vi.adjoint();
            }
        }
        v_blocks.push(iso);
        abs_blocks.push(absx);
    }
    (
        AlgebraElement::new(x.algebra().clone(), v_blocks).unwrap(),
        AlgebraElement::new(x.algebra().clone(), abs_blocks).unwrap(),
    )
}

/// Orthonormal (Hilbert–Schmidt) basis of the commutant
/// `{Y : [Y, g] = 0 for all generators g}` of a family of represented
/// operators on `C^d`. The generator set is closed under adjoints
/// automatically.
pub fn commutant(generators: &[CMat], tol: &Tol) -> Result<Vec<CMat>> {
    if generators.is_empty() {
        return Err(Error::InvalidInput("commutant of empty generator set".into()));
    }
    let d = generators[0].nrows();
    for g in generators {
        if g.nrows() != d || g.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0}", d),
                found: format!("{}x{}", g.nrows(), g.ncols()),
            });
        }
    }
    let id = identity(d);
    // M = Σ_g C_g† C_g with C_g vec(Y) = vec(gY - Yg); kernel = commutant.
    let mut m = CMat::zeros(d * d, d * d);
    let mut gens: Vec<CMat> = generators.to_vec();
    gens.extend(generators.iter().map(|g| g.adjoint()));
    for g in &gens {
        let cg = kron(&id, g) - kron(&g.transpose(), &id);
        m += cg.adjoint() * cg;
    }
    // null-space cut against the generator energy scale, not λ_max(M):
    // when the generators (numerically) all commute, M itself is pure
    // roundoff and a relative cut would misclassify the kernel
    let scale: f64 = gens.iter().map(|g| op_norm(g).powi(2)).sum();
    if scale <= f64::MIN_POSITIVE {
        // zero generators commute with everything
        return Ok((0..d * d)
            .map(|i| {
                let mut e = vec![cr(0.0); d * d];
                e[i] = cr(1.0);
                unvec(&e, d)
            })
            .collect());
    }
    let thr = tol.spec * scale;
    let (vals, vecs) = herm_eig(&m);
    let mut basis = Vec::new();
    for (i, &lam) in vals.iter().enumerate() {
        if lam <= thr {
            let col: Vec<C64> = vecs.column(i).iter().copied().collect();
            basis.push(unvec(&col, d));
        }
    }
    basis.reverse(); // smallest residual first
    Ok(basis)
}

/// Residual of `x` against the Hilbert–Schmidt span of an orthonormal
/// basis; zero means membership.
pub fn span_residual(x: &CMat, basis: &[CMat]) -> f64 {
    let mut proj = CMat::zeros(x.nrows(), x.ncols());
    for b in basis {
        proj += b * la::hs_inner(b, x);
    }
    let nx = x.norm();
    if nx == 0.0 {
        return 0.0;
    }
    (x - proj).norm() / nx
}

/// A minimal central projection with its factor type.
#[derive(Debug, Clone)]
pub struct CentralFactor {
    pub projection: AlgebraElement,
    /// `n` in the type label `I_n`.
    pub type_dim: usize,
    pub mult: usize,
}

impl CentralFactor {
    pub fn label(&self) -> String {
        format!("I_{}", self.type_dim)
    }
}

/// Minimal central projections (the per-block identities) with their type
/// labels; their sum is the identity.
pub fn center_and_classify(algebra: &MatrixAlgebra) -> Vec<CentralFactor> {
    algebra
        .blocks()
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let mut p = AlgebraElement::zero(algebra.clone());
            p.blocks[k] = identity(b.dim);
            CentralFactor {
                projection: p,
                type_dim: b.dim,
                mult: b.mult,
            }
        })
        .collect()
}

/// Pinching conditional expectation `E(x) = Σ_i P_i x P_i` for a partition
/// of the identity into orthogonal projections. `E` is idempotent, unital,
/// positive and trace-preserving, with the bimodule property over the
/// pinched subalgebra.
pub fn pinch_expectation(
    x: &AlgebraElement,
    partition: &[AlgebraElement],
    tol: &Tol,
) -> Result<AlgebraElement> {
    if partition.is_empty() {
        return Err(Error::BadPartition("empty partition".into()));
    }
    for p in partition {
        if p.algebra() != x.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        if !p.is_projection(tol) {
            return Err(Error::BadPartition("member is not a projection".into()));
        }
    }
    for (i, p) in partition.iter().enumerate() {
        for q in &partition[i + 1..] {
            if p.mul(q).operator_norm() > tol.spec {
                return Err(Error::BadPartition("projections are not orthogonal".into()));
            }
        }
    }
    let mut sum = AlgebraElement::zero(x.algebra().clone());
    for p in partition {
        sum = sum.add(p);
    }
    let id = AlgebraElement::identity(x.algebra().clone());
    if sum.sub(&id).operator_norm() > tol.spec {
        return Err(Error::BadPartition("projections do not sum to the identity".into()));
    }
    let mut out = AlgebraElement::zero(x.algebra().clone());
    for p in partition {
        out = out.add(&p.mul(x).mul(p));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use approx::assert_relative_eq;
    use rand::SeedableRng;

    fn tol() -> Tol {
        Tol::default()
    }

    // Power-iteration oracle for the largest eigenvalue of x*x.
    fn power_iteration_norm(x: &CMat, iters: usize) -> f64 {
        let g = x.adjoint() * x;
        let n = g.nrows();
        let mut v = CMat::from_fn(n, 1, |i, _| cr(1.0 + (i as f64) * 0.3));
        let mut lam = 0.0;
        for _ in 0..iters {
            let w = &g * &v;
            lam = w.norm();
            if lam == 0.0 {
                return 0.0;
            }
            v = w / cr(lam);
        }
        lam.sqrt()
    }

    // Characteristic polynomial coefficients via Faddeev–LeVerrier.
    fn char_poly(a: &CMat) -> Vec<f64> {
        let n = a.nrows();
        let mut coeffs = vec![1.0];
        let mut m = CMat::zeros(n, n);
        let id = identity(n);
        for k in 1..=n {
            m = a * m + &id * cr(coeffs[k - 1]);
            let ck = -(a * &m).trace().re / k as f64;
            coeffs.push(ck);
        }
        coeffs // p(λ) = Σ coeffs[i] λ^{n-i}
    }

    fn eval_poly(coeffs: &[f64], lam: f64) -> f64 {
        coeffs.iter().fold(0.0, |acc, &c| acc * lam + c)
    }

    // Root isolation by sign-change bisection on a dense grid.
    fn poly_roots(coeffs: &[f64], lo: f64, hi: f64) -> Vec<f64> {
        let grid = 20000;
        let mut roots = Vec::new();
        let mut prev = eval_poly(coeffs, lo);
        let mut prev_x = lo;
        for i in 1..=grid {
            let x = lo + (hi - lo) * i as f64 / grid as f64;
            let val = eval_poly(coeffs, x);
            if prev == 0.0 {
                roots.push(prev_x);
            } else if prev * val < 0.0 {
                let (mut a, mut b) = (prev_x, x);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    let fm = eval_poly(coeffs, mid);
                    if fm == 0.0 {
                        a = mid;
                        b = mid;
                        break;
                    }
                    if eval_poly(coeffs, a) * fm < 0.0 {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            prev = val;
            prev_x = x;
        }
        roots
    }

    #[test]
    fn operator_norm_identity_and_diag() {
        let alg = MatrixAlgebra::factor(2);
        let id = AlgebraElement::identity(alg.clone());
        assert_relative_eq!(id.operator_norm(), 1.0, epsilon = 1e-14);
        let d = AlgebraElement::from_diagonals(alg, &[vec![3.0, -4.0]]).unwrap();
        assert_relative_eq!(d.operator_norm(), 4.0, epsilon = 1e-13);
    }

    #[test]
    fn operator_norm_matches_power_iteration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let alg = MatrixAlgebra::factor(4);
        let x = gen::random_element(&alg, &mut rng);
        let oracle = power_iteration_norm(x.block(0), 4000);
        assert_relative_eq!(x.operator_norm(), oracle, epsilon = 1e-9);
    }

    #[test]
    fn cstar_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let alg = MatrixAlgebra::new(vec![(2, 1), (3, 2)]).unwrap();
        for _ in 0..20 {
            let x = gen::random_element(&alg, &mut rng);
            let lhs = x.adjoint().mul(&x).operator_norm();
            let rhs = x.operator_norm().powi(2);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
        }
    }

    #[test]
    fn spectral_decompose_clusters_degenerate() {
        let alg = MatrixAlgebra::factor(3);
        let a = AlgebraElement::from_diagonals(alg, &[vec![1.0, 1.0, 2.0]]).unwrap();
        let sd = spectral_decompose(&a, &tol()).unwrap();
        assert_eq!(sd.eigenvalues.len(), 2);
        assert_relative_eq!(sd.eigenvalues[0], 2.0, epsilon = 1e-12);
        assert_relative_eq!(sd.eigenvalues[1], 1.0, epsilon = 1e-12);
        assert_eq!(sd.multiplicities, vec![1, 2]);
        let rec = sd.reconstruct();
        assert!(rec.sub(&a).operator_norm() <= 1e-12);
    }

    #[test]
    fn spectral_decompose_pauli_x() {
        let alg = MatrixAlgebra::factor(2);
        let mut sx = AlgebraElement::zero(alg);
        sx.blocks[0][(0, 1)] = cr(1.0);
        sx.blocks[0][(1, 0)] = cr(1.0);
        let sd = spectral_decompose(&sx, &tol()).unwrap();
        assert_eq!(sd.eigenvalues.len(), 2);
        assert_relative_eq!(sd.eigenvalues[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(sd.eigenvalues[1], -1.0, epsilon = 1e-12);
        // projectors are (I ± σ_x)/2
        for (sign, p) in [(1.0, &sd.projectors[0]), (-1.0, &sd.projectors[1])] {
            let expected = AlgebraElement::identity(sx.algebra().clone())
                .add(&sx.scale_re(sign))
                .scale_re(0.5);
            assert!(p.sub(&expected).operator_norm() <= 1e-12);
        }
    }

    #[test]
    fn spectral_decompose_matches_char_poly_roots() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let alg = MatrixAlgebra::factor(5);
        let a = gen::random_hermitian(&alg, &mut rng);
        let sd = spectral_decompose(&a, &tol()).unwrap();
        let r = a.operator_norm() + 1.0;
        let mut roots = poly_roots(&char_poly(a.block(0)), -r, r);
        roots.sort_by(|x, y| y.partial_cmp(x).unwrap());
        assert_eq!(roots.len(), 5);
        let mut eigs = Vec::new();
        for (lam, &m) in sd.eigenvalues.iter().zip(&sd.multiplicities) {
            for _ in 0..m {
                eigs.push(*lam);
            }
        }
        for (e, r) in eigs.iter().zip(&roots) {
            assert_relative_eq!(e, r, epsilon = 1e-8);
        }
        // reconstruction and orthogonality
        assert!(sd.reconstruct().sub(&a).operator_norm() <= 1e-10 * a.operator_norm());
        for (i, p) in sd.projectors.iter().enumerate() {
            for q in &sd.projectors[i + 1..] {
                assert!(p.mul(q).operator_norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn spectral_rejects_non_hermitian() {
        let alg = MatrixAlgebra::factor(2);
        let mut x = AlgebraElement::zero(alg);
        x.blocks[0][(0, 1)] = cr(1.0);
        assert!(matches!(
            spectral_decompose(&x, &tol()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn polar_of_positive_is_support_times_self() {
        let alg = MatrixAlgebra::factor(3);
        let a = AlgebraElement::from_diagonals(alg, &[vec![2.0, 1.0, 0.0]]).unwrap();
        let (v, abs) = polar_decompose(&a, &tol());
        assert!(abs.sub(&a).operator_norm() <= 1e-12);
        let supp = a.support_projection(&tol()).unwrap();
        assert!(v.sub(&supp).operator_norm() <= 1e-12);
    }

    #[test]
    fn polar_of_unitary() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let alg = MatrixAlgebra::factor(3);
        let u = gen::random_unitary(&alg, &mut rng);
        let (v, abs) = polar_decompose(&u, &tol());
        let id = AlgebraElement::identity(u.algebra().clone());
        assert!(abs.sub(&id).operator_norm() <= 1e-12);
        assert!(v.sub(&u).operator_norm() <= 1e-12);
    }

    #[test]
    fn polar_rank_two_constructed_truth() {
        // x = u Σ v† with known Σ = diag(2, 1, 0): ground truth by construction.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        let alg = MatrixAlgebra::factor(3);
        let u = gen::random_unitary(&alg, &mut rng);
        let w = gen::random_unitary(&alg, &mut rng);
        let sigma = AlgebraElement::from_diagonals(alg.clone(), &[vec![2.0, 1.0, 0.0]]).unwrap();
        let x = u.mul(&sigma).mul(&w.adjoint());
        let (v, abs) = polar_decompose(&x, &tol());
        assert!(v.mul(&abs).sub(&x).operator_norm() <= 1e-10);
        let expected_abs = w.mul(&sigma).mul(&w.adjoint());
        assert!(abs.sub(&expected_abs).operator_norm() <= 1e-10);
        let vv = v.adjoint().mul(&v);
        let p2 = AlgebraElement::from_diagonals(alg, &[vec![1.0, 1.0, 0.0]]).unwrap();
        let expected_supp = w.mul(&p2).mul(&w.adjoint());
        assert!(vv.sub(&expected_supp).operator_norm() <= 1e-10);
        assert!(vv.is_projection(&tol()));
        // vv* = supp(|x*|)
        let lhs = v.mul(&v.adjoint());
        let xstar_abs = polar_decompose(&x.adjoint(), &tol()).1;
        let rhs = xstar_abs.support_projection(&tol()).unwrap();
        assert!(lhs.sub(&rhs).operator_norm() <= 1e-10);
    }

    #[test]
    fn polar_of_zero() {
        let alg = MatrixAlgebra::factor(2);
        let z = AlgebraElement::zero(alg);
        let (v, abs) = polar_decompose(&z, &tol());
        assert!(v.is_zero(0.0) && abs.is_zero(0.0));
        assert!(z.support_projection(&tol()).unwrap().is_zero(0.0));
    }

    #[test]
    fn support_threshold_semantics() {
        let alg = MatrixAlgebra::factor(2);
        let a = AlgebraElement::from_diagonals(alg.clone(), &[vec![2.0, 0.0]]).unwrap();
        let p = a.support_projection(&tol()).unwrap();
        let expected = AlgebraElement::from_diagonals(alg.clone(), &[vec![1.0, 0.0]]).unwrap();
        assert!(p.sub(&expected).operator_norm() <= 1e-13);
        // invertible hermitian -> identity
        let b = AlgebraElement::from_diagonals(alg.clone(), &[vec![1.0, -0.5]]).unwrap();
        let id = AlgebraElement::identity(alg.clone());
        assert!(b.support_projection(&tol()).unwrap().sub(&id).operator_norm() <= 1e-13);
        // eigenvalue below the 1e-10 relative cut is squashed
        let c = AlgebraElement::from_diagonals(alg, &[vec![1.0, 1e-14]]).unwrap();
        assert!(c.support_projection(&tol()).unwrap().sub(&expected).operator_norm() <= 1e-13);
    }

    #[test]
    fn commutant_of_irreducible_factor_is_scalars() {
        let alg = MatrixAlgebra::factor(2);
        let gens: Vec<CMat> = alg.matrix_units().iter().map(|u| u.represent()).collect();
        let basis = commutant(&gens, &tol()).unwrap();
        assert_eq!(basis.len(), 1);
        let id = identity(2);
        assert!(span_residual(&id, &basis) <= 1e-10);
    }

    #[test]
    fn commutant_dimension_with_multiplicity() {
        let alg = MatrixAlgebra::new(vec![(2, 2)]).unwrap();
        let gens: Vec<CMat> = alg.matrix_units().iter().map(|u| u.represent()).collect();
        let basis = commutant(&gens, &tol()).unwrap();
        assert_eq!(basis.len(), 4);
        assert_eq!(alg.commutant_dim(), 4);
    }

    #[test]
    fn bicommutant_of_irreducible_factor_is_everything() {
        // C(M_4) = C·1, and C(C·1) = all of M_4: the intermediate
        // generator set commutes numerically, so the kernel cut must not
        // be relative to λ_max of an all-roundoff commutator matrix
        let alg = MatrixAlgebra::factor(4);
        let gens: Vec<CMat> = alg.matrix_units().iter().map(|u| u.represent()).collect();
        let comm = commutant(&gens, &tol()).unwrap();
        assert_eq!(comm.len(), 1);
        let bicomm = commutant(&comm, &tol()).unwrap();
        assert_eq!(bicomm.len(), 16);
        for g in &gens {
            assert!(span_residual(g, &bicomm) <= 1e-9);
        }
    }

    #[test]
    fn bicommutant_is_idempotent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        // reducible family on C^4: M_2 with multiplicity 2
        let alg = MatrixAlgebra::new(vec![(2, 2)]).unwrap();
        let a = gen::random_element(&alg, &mut rng).represent();
        let b = gen::random_element(&alg, &mut rng).represent();
        let comm = commutant(&[a, b], &tol()).unwrap();
        let bicomm = commutant(&comm, &tol()).unwrap();
        let tricomm = commutant(&bicomm, &tol()).unwrap();
        assert_eq!(comm.len(), tricomm.len());
        for m in &comm {
            assert!(span_residual(m, &tricomm) <= 1e-9);
        }
    }

    #[test]
    fn classify_blocks() {
        let alg = MatrixAlgebra::new(vec![(2, 1), (3, 1)]).unwrap();
        let factors = center_and_classify(&alg);
        assert_eq!(factors.len(), 2);
        assert_eq!(factors[0].label(), "I_2");
        assert_eq!(factors[1].label(), "I_3");
        let sum = factors[0].projection.add(&factors[1].projection);
        let id = AlgebraElement::identity(alg);
        assert!(sum.sub(&id).operator_norm() == 0.0);
        // central: commutes with everything
        let single = center_and_classify(&MatrixAlgebra::factor(3));
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].label(), "I_3");
        // commutative two-atom algebra: two type I_1 factors
        let atoms = center_and_classify(&MatrixAlgebra::new(vec![(1, 1), (1, 1)]).unwrap());
        assert_eq!(atoms.len(), 2);
        assert!(atoms.iter().all(|f| f.label() == "I_1"));
    }

    #[test]
    fn pinch_trivial_and_diagonal() {
        let alg = MatrixAlgebra::factor(2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let x = gen::random_element(&alg, &mut rng);
        let id = AlgebraElement::identity(alg.clone());
        let e = pinch_expectation(&x, &[id], &tol()).unwrap();
        assert!(e.sub(&x).operator_norm() <= 1e-14);

        let p0 = AlgebraElement::from_diagonals(alg.clone(), &[vec![1.0, 0.0]]).unwrap();
        let p1 = AlgebraElement::from_diagonals(alg, &[vec![0.0, 1.0]]).unwrap();
        let e = pinch_expectation(&x, &[p0, p1], &tol()).unwrap();
        assert_relative_eq!(e.block(0)[(0, 0)].re, x.block(0)[(0, 0)].re, epsilon = 1e-14);
        assert!(e.block(0)[(0, 1)].norm() <= 1e-14);
    }

    #[test]
    fn pinch_trace_preserving_module_property() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let alg = MatrixAlgebra::factor(4);
        let x = gen::random_element(&alg, &mut rng);
        // 2+2 partition
        let p1 = AlgebraElement::from_diagonals(alg.clone(), &[vec![1.0, 1.0, 0.0, 0.0]]).unwrap();
        let p2 = AlgebraElement::from_diagonals(alg.clone(), &[vec![0.0, 0.0, 1.0, 1.0]]).unwrap();
        let part = vec![p1.clone(), p2.clone()];
        let e = pinch_expectation(&x, &part, &tol()).unwrap();
        assert!((e.trace_can() - x.trace_can()).norm() <= 1e-12);
        // idempotence
        let ee = pinch_expectation(&e, &part, &tol()).unwrap();
        assert!(ee.sub(&e).operator_norm() <= 1e-12);
        // positivity
        let pos = gen::random_psd(&alg, &mut rng);
        assert!(pinch_expectation(&pos, &part, &tol()).unwrap().is_positive(&tol()));
        // module property: E(y1 x y2) = y1 E(x) y2 for y_i in the pinched
        // subalgebra (block-diagonal w.r.t. the partition)
        let y1 = p1.mul(&gen::random_element(&alg, &mut rng)).mul(&p1);
        let y2 = p2.mul(&gen::random_element(&alg, &mut rng)).mul(&p2);
        let y = y1.add(&y2);
        let lhs = pinch_expectation(&y.mul(&x).mul(&y), &part, &tol()).unwrap();
        let rhs = y.mul(&e).mul(&y);
        assert!(lhs.sub(&rhs).operator_norm() <= 1e-10);
    }

    #[test]
    fn pinch_rejects_bad_partition() {
        let alg = MatrixAlgebra::factor(2);
        let x = AlgebraElement::identity(alg.clone());
        let p = AlgebraElement::from_diagonals(alg, &[vec![1.0, 0.0]]).unwrap();
        assert!(matches!(
            pinch_expectation(&x, &[p], &tol()),
            Err(Error::BadPartition(_))
        ));
    }
}
