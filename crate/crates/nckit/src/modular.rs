//! GNS construction, Hilbert–Schmidt standard form, modular operators and
//! flows, relative modular operators, Connes cocycles with analytic
//! continuation, KMS verification, Pedersen–Takesaki densities and
//! standard liouvilleans.
//!
//! The standard form of `⊕_k M_{n_k}` is the Hilbert–Schmidt space of the
//! algebra itself: vectors are elements, `⟨a,b⟩ = Σ_k tr(a_k† b_k)`, the
//! left/right actions are multiplication, `J` is the adjoint map and the
//! standard cone is the PSD cone. The modular operator of a state with
//! density `h` acts as `Δξ = h ξ h⁻`, with pseudo-inverses and pseudo-powers
//! acting as zero off the support.

use crate::algebra::{AlgebraElement, MatrixAlgebra};
use crate::error::Error;
use crate::la::{c, cr, herm_eig, pow_z, C64, CMat};
use crate::lp::mazur;
use crate::states::{StateDensity, TraceFlavor};
use crate::tol::Tol;
use crate::Result;

// ---------------------------------------------------------------------
// GNS construction
// ---------------------------------------------------------------------

/// GNS data of a positive functional: the representation Hilbert space as
/// coefficient vectors over the matrix-unit basis, the represented
/// left-multiplication matrices and the cyclic vector.
#[derive(Debug, Clone)]
pub struct GnsData {
    algebra: MatrixAlgebra,
    /// Hilbert space dimension (rank of the Gram matrix).
    pub dim: usize,
    /// `D × r`: column α holds the matrix-unit coefficients of an element
    /// representing the α-th orthonormal basis vector of `H_ω`.
    basis: CMat,
    /// `T = Λ^{1/2} U†`, mapping unit coefficients to `H_ω` coordinates.
    class_map: CMat,
    /// `π(b_i)` for each matrix unit, as `r × r` matrices.
    rep: Vec<CMat>,
    /// Coordinates of the cyclic vector `Ω = [1]_ω`.
    pub omega: CMat,
}

/// Matrix-unit coefficient vector of an element (block-major, row-major
/// within each block).
fn unit_coords(x: &AlgebraElement) -> Vec<C64> {
    let mut out = Vec::with_capacity(x.algebra().hs_dim());
    for b in x.blocks() {
        for i in 0..b.nrows() {
            for j in 0..b.ncols() {
                out.push(b[(i, j)]);
            }
        }
    }
    out
}

/// GNS representation `(H_ω, π_ω, Ω_ω)` from the Gram matrix
/// `G_{ij} = ω(b_i* b_j)` over matrix units. For faithful ω the dimension
/// is `Σ n_k²`.
pub fn gns(omega: &StateDensity, tol: &Tol) -> GnsData {
    let alg = omega.algebra().clone();
    let units = alg.matrix_units();
    let d = units.len();
    let mut gram = CMat::zeros(d, d);
    for (i, bi) in units.iter().enumerate() {
        for (j, bj) in units.iter().enumerate() {
            gram[(i, j)] = omega.evaluate(&bi.adjoint().mul(bj)).unwrap();
        }
    }
    let (vals, u) = herm_eig(&gram);
    let lam_max = vals.first().copied().unwrap_or(0.0);
    let rank = vals.iter().filter(|&&v| v > tol.supp * lam_max).count();
    // T = Λ^{1/2} U† restricted to the positive part; T⁺ = U Λ^{-1/2}
    let mut t = CMat::zeros(rank, d);
    let mut t_pinv = CMat::zeros(d, rank);
    for a in 0..rank {
        let s = vals[a].sqrt();
        for i in 0..d {
            t[(a, i)] = u[(i, a)].conj() * cr(s);
            t_pinv[(i, a)] = u[(i, a)] / cr(s);
        }
    }
    // left multiplication matrices on unit coefficients, compressed to H_ω
    let mut rep = Vec::with_capacity(d);
    for b in &units {
        let mut a_mat = CMat::zeros(d, d);
        for (m, um) in units.iter().enumerate() {
            let prod = b.mul(um);
            let col = unit_coords(&prod);
            for i in 0..d {
                a_mat[(i, m)] = col[i];
            }
        }
        rep.push(&t * a_mat * &t_pinv);
    }
    let id = AlgebraElement::identity(alg.clone());
    let omega_vec = &t * CMat::from_column_slice(d, 1, &unit_coords(&id));
    GnsData {
        algebra: alg,
        dim: rank,
        basis: t_pinv,
        class_map: t,
        rep,
        omega: omega_vec,
    }
}

impl GnsData {
    pub fn algebra(&self) -> &MatrixAlgebra {
        &self.algebra
    }

    /// Coefficients of representing elements for the orthonormal basis.
    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    /// `[x]_ω` coordinates.
    pub fn class_vector(&self, x: &AlgebraElement) -> CMat {
        &self.class_map * CMat::from_column_slice(self.class_map.ncols(), 1, &unit_coords(x))
    }

    /// `π_ω(x)` as an `r × r` matrix.
    pub fn pi(&self, x: &AlgebraElement) -> CMat {
        let coords = unit_coords(x);
        let mut out = CMat::zeros(self.dim, self.dim);
        for (ci, m) in coords.iter().zip(&self.rep) {
            out += m * *ci;
        }
        out
    }

    /// `⟨Ω, π(x) Ω⟩`.
    pub fn expectation(&self, x: &AlgebraElement) -> C64 {
        (self.omega.adjoint() * self.pi(x) * &self.omega)[(0, 0)]
    }

    /// Commutant dimension of `π(N)`; 1 means irreducible.
    pub fn commutant_dim(&self, tol: &Tol) -> usize {
        crate::algebra::commutant(&self.rep, tol).map(|b| b.len()).unwrap_or(0)
    }
}

// ---------------------------------------------------------------------
// Standard form
// ---------------------------------------------------------------------

/// The Hilbert–Schmidt standard form `(H, L, J, H⁺)` of a block algebra.
#[derive(Debug, Clone)]
pub struct StandardForm {
    algebra: MatrixAlgebra,
}

impl StandardForm {
    pub fn new(algebra: MatrixAlgebra) -> Self {
        StandardForm { algebra }
    }

    pub fn algebra(&self) -> &MatrixAlgebra {
        &self.algebra
    }

    pub fn inner(&self, a: &AlgebraElement, b: &AlgebraElement) -> C64 {
        a.hs_inner(b)
    }

    /// Left action `L(x)ξ = xξ`.
    pub fn left(&self, x: &AlgebraElement, xi: &AlgebraElement) -> AlgebraElement {
        x.mul(xi)
    }

    /// Right action `R(x)ξ = ξx`.
    pub fn right(&self, x: &AlgebraElement, xi: &AlgebraElement) -> AlgebraElement {
        xi.mul(x)
    }

    /// Modular conjugation `Jξ = ξ*`.
    pub fn conj(&self, xi: &AlgebraElement) -> AlgebraElement {
        xi.adjoint()
    }

    /// Standard cone membership: PSD as a block matrix.
    pub fn in_cone(&self, xi: &AlgebraElement, tol: &Tol) -> bool {
        xi.is_positive(tol)
    }

    /// Standard vector representative `ξ(φ) = h_φ^{1/2}` (canonical-trace
    /// density); lies in the cone and represents `φ(x) = ⟨ξ, L(x)ξ⟩`.
    pub fn std_vector(&self, phi: &StateDensity, tol: &Tol) -> AlgebraElement {
        let h = phi.dye_segal_density(TraceFlavor::Can);
        mazur(&h, 0.5, tol).expect("density is PSD")
    }

    /// Every Hilbert–Schmidt vector is a combination of four cone
    /// elements: `ξ = p₀ − p₁ + i(p₂ − p₃)` with all `p_i` PSD.
    pub fn cone_decompose(&self, xi: &AlgebraElement) -> [AlgebraElement; 4] {
        let re = xi.add(&xi.adjoint()).scale_re(0.5);
        let im = xi.sub(&xi.adjoint()).scale(c(0.0, -0.5));
        let split = |a: &AlgebraElement| {
            let plus = a.map_blocks(|b| crate::la::herm_fn(b, |lam| cr(lam.max(0.0))));
            let minus = plus.sub(a);
            (plus, minus)
        };
        let (p0, p1) = split(&re);
        let (p2, p3) = split(&im);
        [p0, p1, p2, p3]
    }
}

// ---------------------------------------------------------------------
// Modular operator and flow
// ---------------------------------------------------------------------

/// Modular data of a state: `Δξ = h ξ h⁻` with pseudo-inverse off the
/// support. Non-faithful states are handled by automatic reduction to the
/// support corner.
#[derive(Debug, Clone)]
pub struct ModularData {
    h: AlgebraElement,
    cut: f64,
    faithful: bool,
    support: AlgebraElement,
}

/// Modular operator of `φ`, reducing to the support automatically when the
/// state is not faithful.
pub fn modular_operator(phi: &StateDensity, tol: &Tol) -> ModularData {
    let h = phi.dye_segal_density(TraceFlavor::Can);
    let cut = tol.supp * h.operator_norm();
    ModularData {
        support: phi.support(tol),
        faithful: phi.is_faithful(tol),
        h,
        cut,
    }
}

/// Modular operator that refuses non-faithful states instead of reducing.
pub fn modular_operator_strict(phi: &StateDensity, tol: &Tol) -> Result<ModularData> {
    if !phi.is_faithful(tol) {
        return Err(Error::NotFaithful {
            min_eigenvalue: phi.density().min_eigenvalue(),
        });
    }
    Ok(modular_operator(phi, tol))
}

impl ModularData {
    pub fn algebra(&self) -> &MatrixAlgebra {
        self.h.algebra()
    }

    pub fn is_faithful(&self) -> bool {
        self.faithful
    }

    pub fn support(&self) -> &AlgebraElement {
        &self.support
    }

    /// Pseudo-power `h^z` (zero off the support).
    pub fn density_pow(&self, z: C64) -> AlgebraElement {
        let cut = self.cut;
        self.h.map_blocks(|b| crate::la::psd_fn_cut(b, cut, |lam| pow_z(lam, z)))
    }

    /// `Δ^s ξ = h^s ξ h^{-s}` for complex `s` (pseudo-powers).
    pub fn delta_pow_apply(&self, s: C64, xi: &AlgebraElement) -> AlgebraElement {
        let left = self.density_pow(s);
        let right = self.density_pow(-s);
        left.mul(xi).mul(&right)
    }

    /// `Δξ`.
    pub fn apply(&self, xi: &AlgebraElement) -> AlgebraElement {
        self.delta_pow_apply(cr(1.0), xi)
    }

    /// Eigenvalues of Δ: all ratios `λ_i/λ_j` of support eigenvalues of
    /// the density, blockwise, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for b in self.h.blocks() {
            let (vals, _) = herm_eig(b);
            let kept: Vec<f64> = vals.iter().copied().filter(|&v| v > self.cut).collect();
            for &a in &kept {
                for &b2 in &kept {
                    out.push(a / b2);
                }
            }
        }
        out.sort_by(|x, y| y.partial_cmp(x).unwrap());
        out
    }

    /// Eigenvalues of the modular hamiltonian `K = -log Δ` on the support.
    pub fn hamiltonian_eigenvalues(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.eigenvalues().iter().map(|r| -r.ln()).collect();
        out.sort_by(|x, y| y.partial_cmp(x).unwrap());
        out
    }

    /// Δ = I iff the state is tracial on its support.
    pub fn is_identity(&self, tol: &Tol) -> bool {
        self.eigenvalues().iter().all(|&r| (r - 1.0).abs() <= tol.spec * 10.0)
    }

    /// Modular flow `σ_t(x) = h^{it} x h^{-it}`.
    pub fn flow(&self, x: &AlgebraElement, t: f64) -> AlgebraElement {
        self.flow_analytic(x, cr(t))
    }

    /// Analytic flow `σ_z(x) = h^{iz} x h^{-iz}` via spectral calculus.
    pub fn flow_analytic(&self, x: &AlgebraElement, z: C64) -> AlgebraElement {
        let left = self.density_pow(c(0.0, 1.0) * z);
        let right = self.density_pow(c(0.0, -1.0) * z);
        left.mul(x).mul(&right)
    }
}

/// `σ_t^φ(x)`; errors with `NotFaithful` when φ is not faithful and `x`
/// does not live in the reduced (support-corner) algebra.
pub fn modular_flow(
    phi: &StateDensity,
    x: &AlgebraElement,
    t: f64,
    tol: &Tol,
) -> Result<AlgebraElement> {
    if phi.algebra() != x.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let md = modular_operator(phi, tol);
    if !md.is_faithful() {
        let p = md.support();
        let reduced = p.mul(x).mul(p);
        if reduced.sub(x).operator_norm() > tol.spec * x.operator_norm().max(1e-300) {
            return Err(Error::NotFaithful {
                min_eigenvalue: phi.density().min_eigenvalue(),
            });
        }
    }
    Ok(md.flow(x, t))
}

// ---------------------------------------------------------------------
// Relative modular operator and Connes cocycles
// ---------------------------------------------------------------------

/// Relative modular operator `Δ_{φ,ψ} ξ = h_φ ξ h_ψ⁻`, pseudo-inverse on
/// `supp(ψ)` and zero off it.
#[derive(Debug, Clone)]
pub struct RelativeModular {
    h_phi: AlgebraElement,
    h_psi: AlgebraElement,
    cut_phi: f64,
    cut_psi: f64,
}

pub fn relative_modular(
    phi: &StateDensity,
    psi: &StateDensity,
    tol: &Tol,
) -> Result<RelativeModular> {
    if phi.algebra() != psi.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let h_phi = phi.dye_segal_density(TraceFlavor::Can);
    let h_psi = psi.dye_segal_density(TraceFlavor::Can);
    Ok(RelativeModular {
        cut_phi: tol.supp * h_phi.operator_norm(),
        cut_psi: tol.supp * h_psi.operator_norm(),
        h_phi,
        h_psi,
    })
}

impl RelativeModular {
    /// Pseudo-powers of the two densities: `Δ^s ξ = h_φ^s ξ h_ψ^{-s}`.
    pub fn pow_apply(&self, s: C64, xi: &AlgebraElement) -> AlgebraElement {
        let cut_l = self.cut_phi;
        let cut_r = self.cut_psi;
        let left = self.h_phi.map_blocks(|b| crate::la::psd_fn_cut(b, cut_l, |lam| pow_z(lam, s)));
        let right = self.h_psi.map_blocks(|b| crate::la::psd_fn_cut(b, cut_r, |lam| pow_z(lam, -s)));
        left.mul(xi).mul(&right)
    }

    pub fn apply(&self, xi: &AlgebraElement) -> AlgebraElement {
        self.pow_apply(cr(1.0), xi)
    }

    /// Eigenvalues `{φ_i / ψ_j}` over the two supports, blockwise.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (bp, bq) in self.h_phi.blocks().iter().zip(self.h_psi.blocks()) {
            let pv: Vec<f64> = herm_eig(bp).0.into_iter().filter(|&v| v > self.cut_phi).collect();
            let qv: Vec<f64> = herm_eig(bq).0.into_iter().filter(|&v| v > self.cut_psi).collect();
            for &a in &pv {
                for &b in &qv {
                    out.push(a / b);
                }
            }
        }
        out.sort_by(|x, y| y.partial_cmp(x).unwrap());
        out
    }
}

fn psd_pseudo_pow(h: &AlgebraElement, z: C64, cut: f64) -> AlgebraElement {
    h.map_blocks(|b| crate::la::psd_fn_cut(b, cut, |lam| pow_z(lam, z)))
}

/// Connes cocycle `(Dφ:Dψ)_t = h_φ^{it} h_ψ^{-it}` (pseudo-powers on the
/// supports). Requires commuting supports; unitary for a faithful pair and
/// a partial isometry otherwise.
pub fn connes_cocycle(
    phi: &StateDensity,
    psi: &StateDensity,
    t: f64,
    tol: &Tol,
) -> Result<AlgebraElement> {
    cocycle_analytic_unchecked(phi, psi, cr(t), tol, true)
}

/// Analytic continuation `(Dφ:Dψ)_z = h_φ^{iz} h_ψ^{-iz}` on the strip
/// `Im z ∈ [-1/2, 0]`. At `z = -i/2` the result `c` satisfies
/// `φ(x) = ψ(c* x c)`; when `φ ≤ λψ`, `‖c‖ ≤ λ^{1/2}`.
pub fn cocycle_analytic(
    phi: &StateDensity,
    psi: &StateDensity,
    z: C64,
    tol: &Tol,
) -> Result<AlgebraElement> {
    if z.im > 1e-12 || z.im < -0.5 - 1e-12 {
        return Err(Error::InvalidInput(format!(
            "Im(z) must lie in [-1/2, 0], got {}",
            z.im
        )));
    }
    if phi.algebra() != psi.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    // boundedness needs supp(φ) ≤ supp(ψ)
    let p_phi = phi.support(tol);
    let p_psi = psi.support(tol);
    if p_phi.mul(&p_psi).sub(&p_phi).operator_norm() > tol.spec {
        return Err(Error::SupportViolation(
            "supp(φ) ≤ supp(ψ) required for the analytic continuation".into(),
        ));
    }
    cocycle_analytic_unchecked(phi, psi, z, tol, false)
}

fn cocycle_analytic_unchecked(
    phi: &StateDensity,
    psi: &StateDensity,
    z: C64,
    tol: &Tol,
    check_commuting: bool,
) -> Result<AlgebraElement> {
    if phi.algebra() != psi.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    if check_commuting {
        let p_phi = phi.support(tol);
        let p_psi = psi.support(tol);
        let residual = p_phi.commutator(&p_psi).operator_norm();
        if residual > tol.spec {
            return Err(Error::NoncommutingSupports { residual });
        }
    }
    let h_phi = phi.dye_segal_density(TraceFlavor::Can);
    let h_psi = psi.dye_segal_density(TraceFlavor::Can);
    let iz = c(0.0, 1.0) * z;
    let left = psd_pseudo_pow(&h_phi, iz, tol.supp * h_phi.operator_norm());
    let right = psd_pseudo_pow(&h_psi, -iz, tol.supp * h_psi.operator_norm());
    Ok(left.mul(&right))
}

// ---------------------------------------------------------------------
// KMS verification
// ---------------------------------------------------------------------

/// One sampled point of a KMS check.
#[derive(Debug, Clone)]
pub struct KmsSample {
    pub t: f64,
    pub f_t: C64,
    pub f_t_plus_i: C64,
    pub target: C64,
    pub residual: f64,
}

/// Result of a KMS boundary-condition check.
#[derive(Debug, Clone)]
pub struct KmsReport {
    pub pass: bool,
    pub max_residual: f64,
    pub threshold: f64,
    pub samples: Vec<KmsSample>,
}

/// KMS check of ω against its own modular flow at β = 1.
///
/// The flow is `α_t = Ad(h^{-it})` (for a Gibbs density `h = e^{-H}/Z`
/// this is the hamiltonian flow `Ad(e^{itH})`). The boundary identity
/// `F(t+i) = ω(α_t(y) x)` is evaluated exactly by spectral calculus;
/// `rel_tol` scales the pass threshold by `‖x‖·‖y‖`.
pub fn kms_check(
    omega: &StateDensity,
    x: &AlgebraElement,
    y: &AlgebraElement,
    t_samples: &[f64],
    rel_tol: f64,
    tol: &Tol,
) -> Result<KmsReport> {
    kms_check_with_flow(omega, omega, x, y, t_samples, rel_tol, tol)
}

/// KMS check of ω against the modular flow of a (possibly different)
/// faithful state. A mismatched flow is the negative control: the boundary
/// identity fails for generic inputs.
pub fn kms_check_with_flow(
    omega: &StateDensity,
    flow_state: &StateDensity,
    x: &AlgebraElement,
    y: &AlgebraElement,
    t_samples: &[f64],
    rel_tol: f64,
    tol: &Tol,
) -> Result<KmsReport> {
    if omega.algebra() != x.algebra() || omega.algebra() != y.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    if !omega.is_faithful(tol) {
        return Err(Error::NotFaithful {
            min_eigenvalue: omega.density().min_eigenvalue(),
        });
    }
    if !flow_state.is_faithful(tol) {
        return Err(Error::NotFaithful {
            min_eigenvalue: flow_state.density().min_eigenvalue(),
        });
    }
    let md = modular_operator(flow_state, tol);
    // α_z(y) = h^{-iz} y h^{iz}
    let alpha = |zz: C64| -> AlgebraElement {
        let left = md.density_pow(c(0.0, -1.0) * zz);
        let right = md.density_pow(c(0.0, 1.0) * zz);
        left.mul(y).mul(&right)
    };
    let threshold = rel_tol * x.operator_norm() * y.operator_norm();
    let mut samples = Vec::with_capacity(t_samples.len());
    let mut max_residual: f64 = 0.0;
    for &t in t_samples {
        let a_t = alpha(cr(t));
        let f_t = omega.evaluate(&x.mul(&a_t))?;
        let a_ti = alpha(c(t, 1.0));
        let f_ti = omega.evaluate(&x.mul(&a_ti))?;
        let target = omega.evaluate(&a_t.mul(x))?;
        let residual = (f_ti - target).norm();
        max_residual = max_residual.max(residual);
        samples.push(KmsSample {
            t,
            f_t,
            f_t_plus_i: f_ti,
            target,
            residual,
        });
    }
    Ok(KmsReport {
        pass: max_residual <= threshold,
        max_residual,
        threshold,
        samples,
    })
}

// ---------------------------------------------------------------------
// Pedersen–Takesaki
// ---------------------------------------------------------------------

/// Outcome of the Pedersen–Takesaki construction: either the unique
/// positive density `h` with `ψ = φ(h^{1/2} · h^{1/2})`, or evidence that
/// ψ is not invariant under the modular flow of φ.
#[derive(Debug, Clone)]
pub enum PtOutcome {
    Density(AlgebraElement),
    InvarianceFailure {
        max_deviation: f64,
        /// `(t, ‖ψ∘σ^φ_t − ψ‖)` over the diagnostic grid.
        samples: Vec<(f64, f64)>,
    },
}

/// Pedersen–Takesaki density of ψ relative to a faithful φ. The
/// finite-dimensional invariance criterion is the commutator test
/// `‖[h_ψ, h_φ]‖ ≤ ε ‖h_ψ‖ ‖h_φ‖`; the flow-deviation grid is diagnostic
/// output only.
pub fn pedersen_takesaki(
    psi: &StateDensity,
    phi: &StateDensity,
    tol: &Tol,
) -> Result<PtOutcome> {
    if psi.algebra() != phi.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    if !phi.is_faithful(tol) {
        return Err(Error::NotFaithful {
            min_eigenvalue: phi.density().min_eigenvalue(),
        });
    }
    let h_psi = psi.dye_segal_density(TraceFlavor::Can);
    let h_phi = phi.dye_segal_density(TraceFlavor::Can);
    let comm = h_psi.commutator(&h_phi).operator_norm();
    let scale = h_psi.operator_norm() * h_phi.operator_norm();
    if comm <= tol.spec * scale.max(1e-300) {
        // h = h_φ^{-1/2} h_ψ h_φ^{-1/2}, manifestly positive, equals
        // h_ψ h_φ^{-1} in the commuting case
        let cut = tol.supp * h_phi.operator_norm();
        let inv_sqrt = h_phi.map_blocks(|b| {
            crate::la::psd_fn_cut(b, cut, |lam| cr(1.0 / lam.sqrt()))
        });
        return Ok(PtOutcome::Density(inv_sqrt.mul(&h_psi).mul(&inv_sqrt)));
    }
    let md = modular_operator(phi, tol);
    let grid = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];
    let mut samples = Vec::with_capacity(grid.len());
    let mut max_dev: f64 = 0.0;
    for &t in &grid {
        // coefficient of ψ∘σ^φ_t is σ^φ_{-t}(h_ψ)
        let moved = md.flow(&h_psi, -t);
        let dev: f64 = moved
            .sub(&h_psi)
            .blocks()
            .iter()
            .map(|b| crate::la::singular_values(b).iter().sum::<f64>())
            .sum();
        max_dev = max_dev.max(dev);
        samples.push((t, dev));
    }
    Ok(PtOutcome::InvarianceFailure {
        max_deviation: max_dev,
        samples,
    })
}

// ---------------------------------------------------------------------
// Standard liouvillean
// ---------------------------------------------------------------------

/// Standard liouvillean `K = L(H) - R(H)` of the inner flow generated by a
/// self-adjoint `H`: `Kξ = Hξ - ξH`, `e^{itK}ξ = e^{itH} ξ e^{-itH}`. It
/// anticommutes with `J` and preserves the standard cone.
#[derive(Debug, Clone)]
pub struct Liouvillean {
    h: AlgebraElement,
}

pub fn standard_liouvillean(h: &AlgebraElement, tol: &Tol) -> Result<Liouvillean> {
    let defect = h.hermiticity_defect();
    if defect > tol.spec {
        return Err(Error::NotHermitian { residual: defect });
    }
    Ok(Liouvillean {
        h: h.add(&h.adjoint()).scale_re(0.5),
    })
}

impl Liouvillean {
    pub fn algebra(&self) -> &MatrixAlgebra {
        self.h.algebra()
    }

    pub fn generator(&self) -> &AlgebraElement {
        &self.h
    }

    /// `Kξ = Hξ - ξH`.
    pub fn apply(&self, xi: &AlgebraElement) -> AlgebraElement {
        self.h.mul(xi).sub(&xi.mul(&self.h))
    }

    /// `e^{itK} ξ = e^{itH} ξ e^{-itH}`.
    pub fn evolve(&self, t: f64, xi: &AlgebraElement) -> AlgebraElement {
        let u = self.h.map_blocks(|b| crate::la::herm_fn(b, |lam| (c(0.0, t * lam)).exp()));
        u.mul(xi).mul(&u.adjoint())
    }

    /// Spectrum: the multiset of pairwise eigenvalue differences of `H`,
    /// blockwise, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for b in self.h.blocks() {
            let (vals, _) = herm_eig(b);
            for &a in &vals {
                for &b2 in &vals {
                    out.push(a - b2);
                }
            }
        }
        out.sort_by(|x, y| y.partial_cmp(x).unwrap());
        out
    }

    /// `‖JK + KJ‖` sampled on a Hilbert–Schmidt basis (exact zero up to
    /// rounding).
    pub fn anticommutator_residual(&self) -> f64 {
        let mut max: f64 = 0.0;
        for unit in self.h.algebra().matrix_units() {
            let jk = self.apply(&unit).adjoint();
            let kj = self.apply(&unit.adjoint());
            max = max.max(jk.add(&kj).operator_norm());
        }
        max
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MatrixAlgebra;
    use crate::gen;
    use approx::assert_relative_eq;

    fn tol() -> Tol {
        Tol::default()
    }

    fn pure_state_m2() -> StateDensity {
        let alg = MatrixAlgebra::factor(2);
        let h = AlgebraElement::from_diagonals(alg, &[vec![1.0, 0.0]]).unwrap();
        StateDensity::from_element(&h, TraceFlavor::Can, &tol()).unwrap()
    }

    #[test]
    fn gns_pure_state_is_two_dimensional_and_irreducible() {
        let g = gns(&pure_state_m2(), &tol());
        assert_eq!(g.dim, 2);
        assert_eq!(g.commutant_dim(&tol()), 1);
        // the compressed representation stays multiplicative and unital
        let alg = MatrixAlgebra::factor(2);
        let mut rng = gen::rng(60);
        for _ in 0..5 {
            let x = gen::random_element(&alg, &mut rng);
            let y = gen::random_element(&alg, &mut rng);
            assert!((g.pi(&x) * g.pi(&y) - g.pi(&x.mul(&y))).norm() <= 1e-10);
        }
        let id = AlgebraElement::identity(alg);
        assert!((g.pi(&id) - crate::la::identity(2)).norm() <= 1e-12);
    }

    #[test]
    fn trace_flavor_presentation_is_invisible_to_modular_objects() {
        // the same functional presented against either trace gives the
        // same flows, cocycles and densities
        let mut rng = gen::rng(62);
        let alg = MatrixAlgebra::new(vec![(2, 3), (3, 1)]).unwrap();
        let phi = gen::random_faithful_state(&alg, &mut rng);
        let psi = gen::random_faithful_state(&alg, &mut rng);
        let phi_rep = phi.with_flavor(TraceFlavor::Rep);
        let x = gen::random_element(&alg, &mut rng);
        let a = modular_flow(&phi, &x, 0.8, &tol()).unwrap();
        let b = modular_flow(&phi_rep, &x, 0.8, &tol()).unwrap();
        assert!(a.sub(&b).operator_norm() <= 1e-12 * a.operator_norm());
        let u1 = connes_cocycle(&phi, &psi, 1.1, &tol()).unwrap();
        let u2 = connes_cocycle(&phi_rep, &psi, 1.1, &tol()).unwrap();
        assert!(u1.sub(&u2).operator_norm() <= 1e-12);
        match (
            pedersen_takesaki(&psi, &phi, &tol()).unwrap(),
            pedersen_takesaki(&psi.with_flavor(TraceFlavor::Rep), &phi_rep, &tol()).unwrap(),
        ) {
            (
                PtOutcome::InvarianceFailure { max_deviation: d1, .. },
                PtOutcome::InvarianceFailure { max_deviation: d2, .. },
            ) => assert!((d1 - d2).abs() <= 1e-10 * (1.0 + d1)),
            (PtOutcome::Density(h1), PtOutcome::Density(h2)) => {
                assert!(h1.sub(&h2).operator_norm() <= 1e-10)
            }
            _ => panic!("flavor presentation changed the PT outcome"),
        }
    }

    #[test]
    fn gns_tracial_state_has_full_hs_dimension() {
        let alg = MatrixAlgebra::factor(2);
        let tracial = StateDensity::tracial(&alg, TraceFlavor::Can);
        let g = gns(&tracial, &tol());
        assert_eq!(g.dim, 4);
    }

    #[test]
    fn gns_reproduces_state_and_is_multiplicative() {
        let mut rng = gen::rng(61);
        let alg = MatrixAlgebra::factor(3);
        let omega = gen::random_faithful_state(&alg, &mut rng);
        let g = gns(&omega, &tol());
        assert_eq!(g.dim, 9);
        for unit in alg.matrix_units() {
            let lhs = g.expectation(&unit);
            let rhs = omega.evaluate(&unit).unwrap();
            assert!((lhs - rhs).norm() <= 1e-10);
        }
        for _ in 0..5 {
            let x = gen::random_element(&alg, &mut rng);
            let y = gen::random_element(&alg, &mut rng);
            let prod = g.pi(&x) * g.pi(&y);
            let direct = g.pi(&x.mul(&y));
            assert!((prod - direct).norm() <= 1e-9);
            let star = g.pi(&x.adjoint());
            assert!((star - g.pi(&x).adjoint()).norm() <= 1e-9);
        }
        // cyclicity: π(units)Ω spans H_ω
        let mut span = CMat::zeros(g.dim, alg.hs_dim());
        for (i, unit) in alg.matrix_units().iter().enumerate() {
            let v = g.pi(&unit) * &g.omega;
            span.set_column(i, &v.column(0));
        }
        let rank = crate::la::singular_values(&span)
            .iter()
            .filter(|&&s| s > 1e-10)
            .count();
        assert_eq!(rank, g.dim);

        // the stored basis columns represent an orthonormal basis of H_ω:
        // [x_α]_ω must come out as the standard coordinate vectors
        let units = alg.matrix_units();
        for a in 0..g.dim {
            let mut el = AlgebraElement::zero(alg.clone());
            for (i, unit) in units.iter().enumerate() {
                el = el.add(&unit.scale(g.basis()[(i, a)]));
            }
            let v = g.class_vector(&el);
            for r in 0..g.dim {
                let expect = if r == a { 1.0 } else { 0.0 };
                assert!((v[(r, 0)] - cr(expect)).norm() <= 1e-9);
            }
        }
    }

    #[test]
    fn std_vector_represents_state_in_cone() {
        let mut rng = gen::rng(67);
        let alg = MatrixAlgebra::new(vec![(2, 1), (2, 2)]).unwrap();
        let sf = StandardForm::new(alg.clone());
        // closed form: h = diag(3/4, 1/4) → ξ = diag(√3/2, 1/2)
        let alg2 = MatrixAlgebra::factor(2);
        let h = AlgebraElement::from_diagonals(alg2.clone(), &[vec![0.75, 0.25]]).unwrap();
        let phi2 = StateDensity::from_element(&h, TraceFlavor::Can, &tol()).unwrap();
        let xi2 = StandardForm::new(alg2).std_vector(&phi2, &tol());
        assert_relative_eq!(xi2.block(0)[(0, 0)].re, 0.75f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(xi2.block(0)[(1, 1)].re, 0.5, epsilon = 1e-12);

        let phi = gen::random_faithful_state(&alg, &mut rng);
        let xi = sf.std_vector(&phi, &tol());
        assert!(sf.in_cone(&xi, &tol()));
        for unit in alg.matrix_units() {
            let lhs = sf.inner(&xi, &sf.left(&unit, &xi));
            let rhs = phi.evaluate(&unit).unwrap();
            assert!((lhs - rhs).norm() <= 1e-11);
        }
        // tracial state on M_n → I/√n
        let alg3 = MatrixAlgebra::factor(3);
        let xi3 = StandardForm::new(alg3.clone())
            .std_vector(&StateDensity::tracial(&alg3, TraceFlavor::Can), &tol());
        assert_relative_eq!(xi3.block(0)[(0, 0)].re, 1.0 / 3f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn cone_is_self_polar_and_spans() {
        let mut rng = gen::rng(68);
        let alg = MatrixAlgebra::new(vec![(3, 1), (2, 1)]).unwrap();
        let sf = StandardForm::new(alg.clone());
        // self-polarity: PSD pairs have nonnegative inner product
        for _ in 0..20 {
            let a = gen::random_psd(&alg, &mut rng);
            let b = gen::random_psd(&alg, &mut rng);
            assert!(sf.inner(&a, &b).re >= -1e-12);
        }
        // four cone elements reconstruct any vector
        for _ in 0..10 {
            let xi = gen::random_element(&alg, &mut rng);
            let [p0, p1, p2, p3] = sf.cone_decompose(&xi);
            for p in [&p0, &p1, &p2, &p3] {
                assert!(sf.in_cone(p, &tol()));
            }
            let rec = p0.sub(&p1).add(&p2.sub(&p3).scale(c(0.0, 1.0)));
            assert!(rec.sub(&xi).operator_norm() <= 1e-12 * xi.operator_norm());
        }
    }

    #[test]
    fn std_vector_order_preserving() {
        let mut rng = gen::rng(71);
        let alg = MatrixAlgebra::factor(3);
        let sf = StandardForm::new(alg.clone());
        // φ ≤ ω with ω = φ + ρ: then ξ(ω) - ξ(φ) ⟂ ... order preservation
        // means ξ(ω) - ξ(φ) pairs nonnegatively against the cone.
        for _ in 0..10 {
            let phi = gen::random_faithful_state(&alg, &mut rng);
            let rho = gen::random_faithful_state(&alg, &mut rng);
            let omega = phi.add(&rho).unwrap();
            let d = sf.std_vector(&omega, &tol()).sub(&sf.std_vector(&phi, &tol()));
            // the cone is self-polar: order on vector representatives ⇔
            // nonnegative pairing with every cone element
            for _ in 0..10 {
                let zeta = gen::random_psd(&alg, &mut rng);
                assert!(sf.inner(&d, &zeta).re >= -1e-9);
            }
        }
    }

    #[test]
    fn modular_operator_of_tracial_state_is_identity() {
        let alg = MatrixAlgebra::factor(2);
        let tracial = StateDensity::tracial(&alg, TraceFlavor::Can);
        let md = modular_operator(&tracial, &tol());
        assert!(md.is_identity(&tol()));
        let mut rng = gen::rng(3);
        let xi = gen::random_element(&alg, &mut rng);
        assert!(md.apply(&xi).sub(&xi).operator_norm() <= 1e-12);
    }

    #[test]
    fn modular_eigenvalues_are_density_ratios() {
        let alg = MatrixAlgebra::factor(2);
        let h = AlgebraElement::from_diagonals(alg, &[vec![0.75, 0.25]]).unwrap();
        let phi = StateDensity::from_element(&h, TraceFlavor::Can, &tol()).unwrap();
        let md = modular_operator(&phi, &tol());
        let eigs = md.eigenvalues();
        let expected = [3.0, 1.0, 1.0, 1.0 / 3.0];
        assert_eq!(eigs.len(), 4);
        for (e, x) in eigs.iter().zip(&expected) {
            assert_relative_eq!(e, x, epsilon = 1e-12);
        }
    }

    #[test]
    fn modular_fixed_point_and_relations() {
        let mut rng = gen::rng(73);
        let alg = MatrixAlgebra::new(vec![(3, 1), (2, 1)]).unwrap();
        let phi = gen::random_faithful_state(&alg, &mut rng);
        let md = modular_operator(&phi, &tol());
        let sf = StandardForm::new(alg.clone());
        let omega_vec = sf.std_vector(&phi, &tol());
        // ΔΩ = Ω, JΩ = Ω
        assert!(md.apply(&omega_vec).sub(&omega_vec).operator_norm() <= 1e-10);
        assert!(sf.conj(&omega_vec).sub(&omega_vec).operator_norm() <= 1e-12);
        // JΔJ = Δ^{-1}
        for _ in 0..5 {
            let xi = gen::random_element(&alg, &mut rng);
            let lhs = sf.conj(&md.apply(&sf.conj(&xi)));
            let rhs = md.delta_pow_apply(cr(-1.0), &xi);
            assert!(lhs.sub(&rhs).operator_norm() <= 1e-9 * rhs.operator_norm().max(1.0));
        }
        // Δ^{1/2} x Ω = J x* Ω
        for _ in 0..5 {
            let x = gen::random_element(&alg, &mut rng);
            let lhs = md.delta_pow_apply(cr(0.5), &x.mul(&omega_vec));
            let rhs = sf.conj(&x.adjoint().mul(&omega_vec));
            assert!(lhs.sub(&rhs).operator_norm() <= 1e-10 * rhs.operator_norm().max(1.0));
        }
    }

    #[test]
    fn modular_flow_examples_and_group_law() {
        let mut rng = gen::rng(79);
        let alg = MatrixAlgebra::factor(2);
        // t = 0 is the identity
        let phi = gen::random_faithful_state(&alg, &mut rng);
        let x = gen::random_element(&alg, &mut rng);
        assert!(modular_flow(&phi, &x, 0.0, &tol()).unwrap().sub(&x).operator_norm() <= 1e-12);
        // tracial flow is trivial for all t
        let tracial = StateDensity::tracial(&alg, TraceFlavor::Can);
        for &t in &[-1.0, 0.3, 2.0] {
            let moved = modular_flow(&tracial, &x, t, &tol()).unwrap();
            assert!(moved.sub(&x).operator_norm() <= 1e-12);
        }
        // closed-form oracle: h = diag(a, b), x = σ_x multiplies
        // off-diagonals by (a/b)^{±it}
        let (a, b) = (0.7, 0.3);
        let h = AlgebraElement::from_diagonals(alg.clone(), &[vec![a, b]]).unwrap();
        let state = StateDensity::from_element(&h, TraceFlavor::Can, &tol()).unwrap();
        let mut sx = AlgebraElement::zero(alg.clone());
        sx.blocks_mut()[0][(0, 1)] = cr(1.0);
        sx.blocks_mut()[0][(1, 0)] = cr(1.0);
        let t = 1.3;
        let moved = modular_flow(&state, &sx, t, &tol()).unwrap();
        let phase = pow_z(a / b, c(0.0, t));
        assert!((moved.block(0)[(0, 1)] - phase).norm() <= 1e-10);
        assert!((moved.block(0)[(1, 0)] - phase.conj()).norm() <= 1e-10);
        // group law σ_s ∘ σ_t = σ_{s+t} and invariance φ∘σ_t = φ
        let alg2 = MatrixAlgebra::new(vec![(2, 1), (3, 1)]).unwrap();
        let psi = gen::random_faithful_state(&alg2, &mut rng);
        let y = gen::random_element(&alg2, &mut rng);
        let (s, t) = (0.8, -0.45);
        let one = modular_flow(&psi, &modular_flow(&psi, &y, t, &tol()).unwrap(), s, &tol()).unwrap();
        let two = modular_flow(&psi, &y, s + t, &tol()).unwrap();
        assert!(one.sub(&two).operator_norm() <= 1e-10);
        let inv = psi.evaluate(&modular_flow(&psi, &y, 1.7, &tol()).unwrap()).unwrap();
        let base = psi.evaluate(&y).unwrap();
        assert!((inv - base).norm() <= 1e-10 * (1.0 + base.norm()));
    }

    #[test]
    fn modular_flow_nonfaithful_reduction() {
        let mut rng = gen::rng(83);
        let alg = MatrixAlgebra::factor(3);
        let omega = gen::random_state_with_ranks(&alg, &[2], &mut rng);
        let p = omega.support(&tol());
        // reduced element flows fine
        let x = p.mul(&gen::random_element(&alg, &mut rng)).mul(&p);
        let moved = modular_flow(&omega, &x, 0.9, &tol()).unwrap();
        let val_before = omega.evaluate(&x).unwrap();
        let val_after = omega.evaluate(&moved).unwrap();
        assert!((val_before - val_after).norm() <= 1e-10 * (1.0 + val_before.norm()));
        // unreduced element is refused
        let y = gen::random_element(&alg, &mut rng);
        assert!(matches!(
            modular_flow(&omega, &y, 0.9, &tol()),
            Err(Error::NotFaithful { .. })
        ));
    }

    #[test]
    fn relative_modular_diagonal_oracle_and_scaling() {
        let mut rng = gen::rng(89);
        let alg = MatrixAlgebra::factor(2);
        let hphi = AlgebraElement::from_diagonals(alg.clone(), &[vec![0.6, 0.4]]).unwrap();
        let hpsi = AlgebraElement::from_diagonals(alg.clone(), &[vec![0.8, 0.2]]).unwrap();
        let phi = StateDensity::from_element(&hphi, TraceFlavor::Can, &tol()).unwrap();
        let psi = StateDensity::from_element(&hpsi, TraceFlavor::Can, &tol()).unwrap();
        let rel = relative_modular(&phi, &psi, &tol()).unwrap();
        let mut expected = vec![0.6 / 0.8, 0.6 / 0.2, 0.4 / 0.8, 0.4 / 0.2];
        expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let eigs = rel.eigenvalues();
        for (e, x) in eigs.iter().zip(&expected) {
            assert_relative_eq!(e, x, epsilon = 1e-11);
        }
        // Δ_{φ,φ} = Δ_φ
        let self_rel = relative_modular(&phi, &phi, &tol()).unwrap();
        let md = modular_operator(&phi, &tol());
        let xi = gen::random_element(&alg, &mut rng);
        assert!(self_rel.apply(&xi).sub(&md.apply(&xi)).operator_norm() <= 1e-12);
        // scaling law Δ_{λ1 φ, λ2 ψ} = (λ1/λ2) Δ_{φ,ψ}
        let rel_scaled = relative_modular(&phi.scaled(2.0), &psi, &tol()).unwrap();
        let lhs = rel_scaled.apply(&xi);
        let rhs = rel.apply(&xi).scale_re(2.0);
        assert!(lhs.sub(&rhs).operator_norm() <= 1e-11);
    }

    #[test]
    fn cocycle_identity_cases() {
        let mut rng = gen::rng(97);
        let alg = MatrixAlgebra::new(vec![(2, 1), (3, 1)]).unwrap();
        let phi = gen::random_faithful_state(&alg, &mut rng);
        // (Dφ:Dφ)_t = 1
        for &t in &[-1.5, 0.0, 0.7] {
            let u = connes_cocycle(&phi, &phi, t, &tol()).unwrap();
            let id = AlgebraElement::identity(alg.clone());
            assert!(u.sub(&id).operator_norm() <= 1e-11);
        }
        // tracial ψ = I/d (canonical flavor): u_t = h_φ^{it} d^{it}
        let alg2 = MatrixAlgebra::factor(3);
        let phi2 = gen::random_faithful_state(&alg2, &mut rng);
        let tracial = StateDensity::tracial(&alg2, TraceFlavor::Can);
        let t = 0.9;
        let u = connes_cocycle(&phi2, &tracial, t, &tol()).unwrap();
        let md = modular_operator(&phi2, &tol());
        let expected = md.density_pow(c(0.0, t)).scale(pow_z(3.0, c(0.0, t)));
        assert!(u.sub(&expected).operator_norm() <= 1e-11);
        // unitarity for faithful pairs
        let psi = gen::random_faithful_state(&alg, &mut rng);
        let u = connes_cocycle(&phi, &psi, 1.2, &tol()).unwrap();
        assert!(u.is_unitary(&Tol::default().with_spec(1e-9)));
    }

    #[test]
    fn cocycle_chain_adjoint_and_cocycle_law() {
        let mut rng = gen::rng(101);
        let alg = MatrixAlgebra::new(vec![(2, 1), (3, 1)]).unwrap();
        let phi = gen::random_faithful_state(&alg, &mut rng);
        let chi = gen::random_faithful_state(&alg, &mut rng);
        let psi = gen::random_faithful_state(&alg, &mut rng);
        for &t in &[-2.0, -0.6, 0.4, 1.0, 2.0] {
            let u_pc = connes_cocycle(&phi, &chi, t, &tol()).unwrap();
            let u_cp = connes_cocycle(&chi, &psi, t, &tol()).unwrap();
            let u_pp = connes_cocycle(&phi, &psi, t, &tol()).unwrap();
            assert!(u_pc.mul(&u_cp).sub(&u_pp).operator_norm() <= 1e-10);
            // adjoint rule (Dφ:Dψ)_t* = (Dψ:Dφ)_t
            let u_rev = connes_cocycle(&psi, &phi, t, &tol()).unwrap();
            assert!(u_pp.adjoint().sub(&u_rev).operator_norm() <= 1e-10);
        }
        // cocycle identity u_{s+t} = u_s σ^ψ_s(u_t)
        let (s, t) = (0.7, -1.1);
        let u_s = connes_cocycle(&phi, &psi, s, &tol()).unwrap();
        let u_t = connes_cocycle(&phi, &psi, t, &tol()).unwrap();
        let u_st = connes_cocycle(&phi, &psi, s + t, &tol()).unwrap();
        let md_psi = modular_operator(&psi, &tol());
        let rhs = u_s.mul(&md_psi.flow(&u_t, s));
        assert!(u_st.sub(&rhs).operator_norm() <= 1e-10);
    }

    #[test]
    fn cocycle_supports_partial_isometry_and_refusal() {
        let mut rng = gen::rng(103);
        let alg = MatrixAlgebra::factor(3);
        // commuting supports: both diagonal, overlapping ranks
        let h1 = AlgebraElement::from_diagonals(alg.clone(), &[vec![0.7, 0.3, 0.0]]).unwrap();
        let h2 = AlgebraElement::from_diagonals(alg.clone(), &[vec![0.0, 0.5, 0.5]]).unwrap();
        let phi = StateDensity::from_element(&h1, TraceFlavor::Can, &tol()).unwrap();
        let psi = StateDensity::from_element(&h2, TraceFlavor::Can, &tol()).unwrap();
        let u0 = connes_cocycle(&phi, &psi, 0.0, &tol()).unwrap();
        let prod = phi.support(&tol()).mul(&psi.support(&tol()));
        assert!(u0.sub(&prod).operator_norm() <= 1e-11);
        let u = connes_cocycle(&phi, &psi, 1.4, &tol()).unwrap();
        assert!(u.is_partial_isometry(&Tol::default().with_spec(1e-9)));

        // noncommuting supports are refused: projections onto e1 and (e1+e2)/√2
        let p1 = AlgebraElement::from_diagonals(alg.clone(), &[vec![1.0, 0.0, 0.0]]).unwrap();
        let mut tilted = AlgebraElement::zero(alg.clone());
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            tilted.blocks_mut()[0][(i, j)] = cr(0.5);
        }
        let st1 = StateDensity::from_element(&p1, TraceFlavor::Can, &tol()).unwrap();
        let st2 = StateDensity::from_element(&tilted, TraceFlavor::Can, &tol()).unwrap();
        assert!(matches!(
            connes_cocycle(&st1, &st2, 1.0, &tol()),
            Err(Error::NoncommutingSupports { .. })
        ));
        let _ = &mut rng;
    }

    #[test]
    fn cocycle_analytic_boundary_identity() {
        let mut rng = gen::rng(107);
        let alg = MatrixAlgebra::new(vec![(2, 1), (2, 1)]).unwrap();
        let phi = gen::random_faithful_state(&alg, &mut rng);
        // φ = ψ → identity for all z in the strip
        for &z in &[c(0.0, 0.0), c(1.0, -0.25), c(-0.5, -0.5)] {
            let u = cocycle_analytic(&phi, &phi, z, &tol()).unwrap();
            let id = AlgebraElement::identity(alg.clone());
            assert!(u.sub(&id).operator_norm() <= 1e-10);
        }
        // diagonal closed form at z = -i/2
        let alg2 = MatrixAlgebra::factor(2);
        let hphi = AlgebraElement::from_diagonals(alg2.clone(), &[vec![0.6, 0.4]]).unwrap();
        let hpsi = AlgebraElement::from_diagonals(alg2.clone(), &[vec![0.3, 0.7]]).unwrap();
        let sphi = StateDensity::from_element(&hphi, TraceFlavor::Can, &tol()).unwrap();
        let spsi = StateDensity::from_element(&hpsi, TraceFlavor::Can, &tol()).unwrap();
        let cmat = cocycle_analytic(&sphi, &spsi, c(0.0, -0.5), &tol()).unwrap();
        assert_relative_eq!(cmat.block(0)[(0, 0)].re, (0.6f64 / 0.3).sqrt(), epsilon = 1e-10);
        assert_relative_eq!(cmat.block(0)[(1, 1)].re, (0.4f64 / 0.7).sqrt(), epsilon = 1e-10);
        // reconstruction φ(x) = ψ(c* x c) on units
        let psi2 = gen::random_faithful_state(&alg, &mut rng);
        let cc = cocycle_analytic(&phi, &psi2, c(0.0, -0.5), &tol()).unwrap();
        for unit in alg.matrix_units() {
            let lhs = phi.evaluate(&unit).unwrap();
            let rhs = psi2.evaluate(&cc.adjoint().mul(&unit).mul(&cc)).unwrap();
            assert!((lhs - rhs).norm() <= 1e-10);
        }
    }

    #[test]
    fn cocycle_analytic_norm_bound_and_support_check() {
        let mut rng = gen::rng(109);
        let alg = MatrixAlgebra::factor(3);
        let psi = gen::random_faithful_state(&alg, &mut rng);
        // φ ≤ 2ψ by construction: h_φ = 2 h_ψ^{1/2} s h_ψ^{1/2}, 0 ≤ s ≤ 1
        let s = gen::random_projection(&alg, &[2], &mut rng).scale_re(0.7);
        let hp = mazur(psi.density(), 0.5, &tol()).unwrap();
        let hphi = hp.mul(&s).mul(&hp).scale_re(2.0);
        let phi = StateDensity::from_element(&hphi, TraceFlavor::Can, &tol()).unwrap();
        let cmat = cocycle_analytic(&phi, &psi, c(0.0, -0.5), &tol()).unwrap();
        assert!(cmat.operator_norm() <= 2f64.sqrt() + 1e-9);

        // support violation: φ faithful, ψ rank-deficient
        let phi_f = gen::random_faithful_state(&alg, &mut rng);
        let psi_r = gen::random_state_with_ranks(&alg, &[2], &mut rng);
        assert!(matches!(
            cocycle_analytic(&phi_f, &psi_r, c(0.0, -0.5), &tol()),
            Err(Error::SupportViolation(_))
        ));
        // strip enforcement
        assert!(matches!(
            cocycle_analytic(&phi_f, &psi, c(0.0, -0.8), &tol()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn cocycle_constant_identity_implies_equal_states() {
        let mut rng = gen::rng(113);
        let alg = MatrixAlgebra::factor(3);
        let phi = gen::random_faithful_state(&alg, &mut rng);
        // equal states: u ≡ 1 on the grid
        for &t in &[-2.0, -1.0, 1.0, 2.0] {
            let u = connes_cocycle(&phi, &phi, t, &tol()).unwrap();
            let id = AlgebraElement::identity(alg.clone());
            assert!(u.sub(&id).operator_norm() <= 1e-10);
        }
        // distinct states: the cocycle moves away from the identity
        let psi = gen::random_faithful_state(&alg, &mut rng);
        let id = AlgebraElement::identity(alg.clone());
        let max_dev = [-2.0, -1.0, 1.0, 2.0]
            .iter()
            .map(|&t| {
                connes_cocycle(&phi, &psi, t, &tol())
                    .unwrap()
                    .sub(&id)
                    .operator_norm()
            })
            .fold(0.0, f64::max);
        assert!(max_dev > 1e-6);
    }

    #[test]
    fn kms_gibbs_passes_and_controls_fail() {
        let mut rng = gen::rng(127);
        let alg = MatrixAlgebra::factor(2);
        let hham = gen::random_hermitian(&alg, &mut rng);
        // Gibbs density e^{-H}/Z
        let expm = hham.map_blocks(|b| crate::la::herm_fn(b, |lam| cr((-lam).exp())));
        let z = expm.trace_can().re;
        let gibbs =
            StateDensity::from_element(&expm.scale_re(1.0 / z), TraceFlavor::Can, &tol()).unwrap();
        let x = gen::random_element(&alg, &mut rng);
        let y = gen::random_element(&alg, &mut rng);
        let ts = [-1.0, 0.0, 0.5, 2.0];
        let report = kms_check(&gibbs, &x, &y, &ts, 1e-9, &tol()).unwrap();
        assert!(report.pass, "KMS residual {}", report.max_residual);

        // tracial state: F(t+i) = F(t) = ω(xy)
        let tracial = StateDensity::tracial(&alg, TraceFlavor::Can);
        let rep2 = kms_check(&tracial, &x, &y, &ts, 1e-10, &tol()).unwrap();
        assert!(rep2.pass);
        for s in &rep2.samples {
            assert!((s.f_t - s.f_t_plus_i).norm() <= 1e-10);
            let xy = tracial.evaluate(&x.mul(&y)).unwrap();
            assert!((s.f_t - xy).norm() <= 1e-10);
        }

        // wrong flow: residual > 1e-3 on generic inputs
        let other = gen::random_faithful_state(&alg, &mut rng);
        let rep3 = kms_check_with_flow(&gibbs, &other, &x, &y, &ts, 1e-9, &tol()).unwrap();
        assert!(rep3.max_residual > 1e-3);
    }

    #[test]
    fn pedersen_takesaki_cases() {
        let mut rng = gen::rng(131);
        let alg = MatrixAlgebra::factor(2);
        let phi = gen::random_faithful_state(&alg, &mut rng);
        // ψ = φ → h = 1
        match pedersen_takesaki(&phi, &phi, &tol()).unwrap() {
            PtOutcome::Density(h) => {
                let id = AlgebraElement::identity(alg.clone());
                assert!(h.sub(&id).operator_norm() <= 1e-10);
            }
            _ => panic!("expected density"),
        }
        // commuting diagonal pair: h = diag(ψ_i/φ_i)
        let hphi = AlgebraElement::from_diagonals(alg.clone(), &[vec![0.6, 0.4]]).unwrap();
        let hpsi = AlgebraElement::from_diagonals(alg.clone(), &[vec![0.2, 0.8]]).unwrap();
        let sphi = StateDensity::from_element(&hphi, TraceFlavor::Can, &tol()).unwrap();
        let spsi = StateDensity::from_element(&hpsi, TraceFlavor::Can, &tol()).unwrap();
        match pedersen_takesaki(&spsi, &sphi, &tol()).unwrap() {
            PtOutcome::Density(h) => {
                assert_relative_eq!(h.block(0)[(0, 0)].re, 0.2 / 0.6, epsilon = 1e-11);
                assert_relative_eq!(h.block(0)[(1, 1)].re, 0.8 / 0.4, epsilon = 1e-11);
                // ψ(x) = φ(h^{1/2} x h^{1/2}) on units
                let hhalf = mazur(&h, 0.5, &tol()).unwrap();
                for unit in alg.matrix_units() {
                    let lhs = spsi.evaluate(&unit).unwrap();
                    let rhs = sphi.evaluate(&hhalf.mul(&unit).mul(&hhalf)).unwrap();
                    assert!((lhs - rhs).norm() <= 1e-11);
                }
            }
            _ => panic!("expected density"),
        }
        // noncommuting densities → invariance failure with sizable deviation
        let psi_rand = gen::random_faithful_state(&alg, &mut rng);
        match pedersen_takesaki(&psi_rand, &phi, &tol()).unwrap() {
            PtOutcome::InvarianceFailure { max_deviation, samples } => {
                assert!(max_deviation > 1e-6);
                let at_one = samples.iter().find(|(t, _)| *t == 1.0).unwrap().1;
                assert!(at_one > 1e-6);
            }
            _ => panic!("expected invariance failure"),
        }
        // φ not faithful is refused
        let partial = gen::random_state_with_ranks(&alg, &[1], &mut rng);
        assert!(matches!(
            pedersen_takesaki(&phi, &partial, &tol()),
            Err(Error::NotFaithful { .. })
        ));
    }

    #[test]
    fn liouvillean_spectrum_and_relations() {
        let alg = MatrixAlgebra::factor(2);
        // H = 1 → K = 0
        let id = AlgebraElement::identity(alg.clone());
        let k = standard_liouvillean(&id, &tol()).unwrap();
        let mut rng = gen::rng(137);
        let xi = gen::random_element(&alg, &mut rng);
        assert!(k.apply(&xi).operator_norm() <= 1e-14);

        // H = diag(1,0) → sp(K) = {1, 0, 0, -1}
        let h = AlgebraElement::from_diagonals(alg.clone(), &[vec![1.0, 0.0]]).unwrap();
        let k = standard_liouvillean(&h, &tol()).unwrap();
        let expected = [1.0, 0.0, 0.0, -1.0];
        for (s, e) in k.spectrum().iter().zip(&expected) {
            assert_relative_eq!(s, e, epsilon = 1e-12);
        }

        // random H on M_3: JK + KJ = 0, cone preservation, automorphism
        let alg3 = MatrixAlgebra::factor(3);
        let h3 = gen::random_hermitian(&alg3, &mut rng);
        let k3 = standard_liouvillean(&h3, &tol()).unwrap();
        assert!(k3.anticommutator_residual() <= 1e-10 * h3.operator_norm().max(1.0));
        for _ in 0..20 {
            let psd = gen::random_psd(&alg3, &mut rng);
            let evolved = k3.evolve(0.8, &psd);
            assert!(evolved.is_positive(&tol()));
        }
        // V(t) implements Ad(e^{itH}) on L(N): e^{itK}(xξ) = σ(x)·e^{itK}ξ
        let x = gen::random_element(&alg3, &mut rng);
        let xi = gen::random_element(&alg3, &mut rng);
        let t = 0.6;
        let u = h3.map_blocks(|b| crate::la::herm_fn(b, |lam| c(0.0, t * lam).exp()));
        let sigma_x = u.mul(&x).mul(&u.adjoint());
        let lhs = k3.evolve(t, &x.mul(&xi));
        let rhs = sigma_x.mul(&k3.evolve(t, &xi));
        assert!(lhs.sub(&rhs).operator_norm() <= 1e-9 * rhs.operator_norm().max(1.0));
        // rejects non-hermitian generator
        let g = gen::random_element(&alg3, &mut rng);
        assert!(matches!(
            standard_liouvillean(&g, &tol()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn natural_cone_quarter_power_identity() {
        // Δ^{1/4}(a Ω) = h^{1/4} a h^{1/4} is PSD for PSD a
        let mut rng = gen::rng(139);
        let alg = MatrixAlgebra::new(vec![(2, 1), (2, 1)]).unwrap();
        let phi = gen::random_faithful_state(&alg, &mut rng);
        let md = modular_operator(&phi, &tol());
        let sf = StandardForm::new(alg.clone());
        let omega_vec = sf.std_vector(&phi, &tol());
        for _ in 0..10 {
            let a = gen::random_psd(&alg, &mut rng);
            let xi = md.delta_pow_apply(cr(0.25), &a.mul(&omega_vec));
            assert!(sf.in_cone(&xi, &Tol::default().with_spec(1e-8)));
        }
    }

    #[test]
    fn tomita_flow_preserves_left_algebra_and_j_maps_to_commutant() {
        let mut rng = gen::rng(149);
        let alg = MatrixAlgebra::new(vec![(2, 1), (2, 1)]).unwrap();
        let phi = gen::random_faithful_state(&alg, &mut rng);
        let md = modular_operator(&phi, &tol());
        let sf = StandardForm::new(alg.clone());
        let x = gen::random_element(&alg, &mut rng);
        let t = 1.1;
        // Δ^{it} L(x) Δ^{-it} = L(σ_t(x))
        let sigma_x = md.flow(&x, t);
        for _ in 0..5 {
            let xi = gen::random_element(&alg, &mut rng);
            let lhs = md.delta_pow_apply(c(0.0, t), &sf.left(&x, &md.delta_pow_apply(c(0.0, -t), &xi)));
            let rhs = sf.left(&sigma_x, &xi);
            assert!(lhs.sub(&rhs).operator_norm() <= 1e-9 * rhs.operator_norm().max(1.0));
        }
        // J L(x) J = R(x*)
        for _ in 0..5 {
            let xi = gen::random_element(&alg, &mut rng);
            let lhs = sf.conj(&sf.left(&x, &sf.conj(&xi)));
            let rhs = sf.right(&x.adjoint(), &xi);
            assert!(lhs.sub(&rhs).operator_norm() <= 1e-12 * rhs.operator_norm().max(1.0));
        }
    }
}
