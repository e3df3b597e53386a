//! Finite boolean algebras with measures: Stone spectrum, Radon–Nikodym
//! quotients, weighted Lp(B,μ), canonical measure-free Lp(B) classes with
//! their integral, and the diagonal embedding bridging to the commutative
//! corner of the matrix-algebra side.
//!
//! Elements of an algebra on `A` atoms are `A`-bit sets in a `u64`; lattice
//! operations are single word operations.

use crate::algebra::{AlgebraElement, MatrixAlgebra};
use crate::error::Error;
use crate::la::cr;
use crate::states::{StateDensity, TraceFlavor};
use crate::tol::Tol;
use crate::Result;

/// Boolean algebra of subsets of `A` atoms, `A ≤ 63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteBooleanAlgebra {
    atoms: usize,
}

impl FiniteBooleanAlgebra {
    pub fn new(atoms: usize) -> Result<Self> {
        if atoms == 0 || atoms > 63 {
            return Err(Error::InvalidInput("atom count must be in 1..=63".into()));
        }
        Ok(FiniteBooleanAlgebra { atoms })
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        (1u64 << self.atoms) - 1
    }

    pub fn atom(&self, a: usize) -> u64 {
        debug_assert!(a < self.atoms);
        1u64 << a
    }

    pub fn contains(&self, x: u64) -> bool {
        x & !self.one() == 0
    }

    pub fn meet(&self, x: u64, y: u64) -> u64 {
        x & y
    }

    pub fn join(&self, x: u64, y: u64) -> u64 {
        x | y
    }

    pub fn not(&self, x: u64) -> u64 {
        !x & self.one()
    }

    pub fn leq(&self, x: u64, y: u64) -> bool {
        x & !y == 0
    }

    /// Iterator over the atoms contained in `x`.
    pub fn atoms_of(&self, x: u64) -> impl Iterator<Item = usize> + '_ {
        (0..self.atoms).filter(move |a| x >> a & 1 == 1)
    }

    /// All `2^A` elements (small algebras only).
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..=self.one()
    }
}

/// A nonzero boolean homomorphism `B → 2`: evaluation at one atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoneHom {
    pub atom: usize,
}

impl StoneHom {
    pub fn eval(&self, x: u64) -> bool {
        x >> self.atom & 1 == 1
    }
}

/// The Stone spectrum: exactly one homomorphism per atom. The
/// representation map `x ↦ x̂ = {h : h(x) = 1}` is a boolean isomorphism
/// onto all subsets of the spectrum.
pub fn stone_spectrum(b: &FiniteBooleanAlgebra) -> Vec<StoneHom> {
    (0..b.atoms()).map(|atom| StoneHom { atom }).collect()
}

/// `x̂` as a bitset over the spectrum returned by [`stone_spectrum`].
pub fn stone_representation(b: &FiniteBooleanAlgebra, x: u64) -> u64 {
    let mut out = 0u64;
    for (i, h) in stone_spectrum(b).iter().enumerate() {
        if h.eval(x) {
            out |= 1 << i;
        }
    }
    out
}

/// Per-atom weights in `(0, ∞]` (strictly positive) or `[0, ∞]`;
/// `μ(x) = Σ_{a ∈ x} w_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureVector {
    weights: Vec<f64>,
}

impl MeasureVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInput("measure needs at least one atom".into()));
        }
        if weights.iter().any(|w| *w < 0.0 || w.is_nan()) {
            return Err(Error::InvalidInput("weights must lie in [0, ∞]".into()));
        }
        Ok(MeasureVector { weights })
    }

    pub fn atoms(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn measure(&self, b: &FiniteBooleanAlgebra, x: u64) -> f64 {
        b.atoms_of(x).map(|a| self.weights[a]).sum()
    }

    pub fn strictly_positive(&self) -> bool {
        self.weights.iter().all(|&w| w > 0.0)
    }

    pub fn finite_on_atoms(&self) -> bool {
        self.weights.iter().all(|w| w.is_finite())
    }

    pub fn scaled(&self, lambda: f64) -> MeasureVector {
        MeasureVector {
            weights: self.weights.iter().map(|w| w * lambda).collect(),
        }
    }
}

/// Radon–Nikodym quotient `f = μ₂/μ₁`: atomwise `w₂/w₁` on the support of
/// `μ₁`, zero elsewhere; requires `μ₂ ≪ μ₁` and finite weights.
pub fn rn_quotient(mu2: &MeasureVector, mu1: &MeasureVector) -> Result<Vec<f64>> {
    if mu1.atoms() != mu2.atoms() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} atoms", mu1.atoms()),
            found: format!("{} atoms", mu2.atoms()),
        });
    }
    if !mu1.finite_on_atoms() || !mu2.finite_on_atoms() {
        return Err(Error::InvalidInput("Radon–Nikodym needs atomwise finite measures".into()));
    }
    let mut out = Vec::with_capacity(mu1.atoms());
    for (a, (&w1, &w2)) in mu1.weights().iter().zip(mu2.weights()).enumerate() {
        if w1 == 0.0 {
            if w2 != 0.0 {
                return Err(Error::NotAbsolutelyContinuous { atom: a });
            }
            out.push(0.0);
        } else {
            out.push(w2 / w1);
        }
    }
    Ok(out)
}

/// `‖f‖_{p,μ} = (Σ_a w_a |f(a)|^p)^{1/p}`; `p = ∞` takes the sup over the
/// support of μ.
pub fn lp_b_norm(f: &[f64], p: f64, mu: &MeasureVector) -> Result<f64> {
    if f.len() != mu.atoms() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} atoms", mu.atoms()),
            found: format!("{}", f.len()),
        });
    }
    if p.is_infinite() && p > 0.0 {
        return Ok(f
            .iter()
            .zip(mu.weights())
            .filter(|(_, &w)| w > 0.0)
            .map(|(v, _)| v.abs())
            .fold(0.0, f64::max));
    }
    if !(p >= 1.0) {
        return Err(Error::BadExponent { p });
    }
    // measure-theoretic 0 · ∞ = 0 on atoms where f vanishes
    Ok(f.iter()
        .zip(mu.weights())
        .map(|(v, w)| if *v == 0.0 { 0.0 } else { w * v.abs().powf(p) })
        .sum::<f64>()
        .powf(1.0 / p))
}

/// Representative `f μ^γ` of a canonical Lp(B) class, `1/γ = p`. Two
/// representatives are the same class iff `f₁ = f₂ (μ₂/μ₁)^γ` atomwise.
#[derive(Debug, Clone)]
pub struct CanonicalLpElement {
    f: Vec<f64>,
    mu: MeasureVector,
    gamma: f64,
}

impl CanonicalLpElement {
    pub fn new(f: Vec<f64>, mu: MeasureVector, gamma: f64) -> Result<Self> {
        if f.len() != mu.atoms() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} atoms", mu.atoms()),
                found: format!("{}", f.len()),
            });
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::InvalidInput(format!("γ must lie in (0, 1], got {gamma}")));
        }
        if !mu.strictly_positive() || !mu.finite_on_atoms() {
            return Err(Error::InvalidInput(
                "canonical representatives need strictly positive finite measures".into(),
            ));
        }
        Ok(CanonicalLpElement { f, mu, gamma })
    }

    pub fn atoms(&self) -> usize {
        self.f.len()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn measure(&self) -> &MeasureVector {
        &self.mu
    }

    /// The same class re-expressed against another strictly positive
    /// measure: `f' = f (μ/μ')^γ`.
    pub fn reexpress(&self, mu_new: &MeasureVector) -> Result<CanonicalLpElement> {
        if !mu_new.strictly_positive() || !mu_new.finite_on_atoms() {
            return Err(Error::InvalidInput("reference measure must be strictly positive".into()));
        }
        let ratio = rn_quotient(&self.mu, mu_new)?;
        let f = self
            .f
            .iter()
            .zip(&ratio)
            .map(|(v, r)| v * r.powf(self.gamma))
            .collect();
        CanonicalLpElement::new(f, mu_new.clone(), self.gamma)
    }

    /// Default common reference: atomwise maximum of the two measures.
    fn common_reference(&self, other: &CanonicalLpElement) -> MeasureVector {
        let weights = self
            .mu
            .weights()
            .iter()
            .zip(other.mu.weights())
            .map(|(a, b)| a.max(*b))
            .collect();
        MeasureVector { weights }
    }

    fn check_compatible(&self, other: &CanonicalLpElement) -> Result<()> {
        if self.atoms() != other.atoms() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} atoms", self.atoms()),
                found: format!("{} atoms", other.atoms()),
            });
        }
        if self.gamma != other.gamma {
            return Err(Error::ExponentMismatch {
                left: self.gamma,
                right: other.gamma,
            });
        }
        Ok(())
    }

    /// Class sum, computed in the given (or default) common reference
    /// measure; the result does not depend on that choice.
    pub fn add(
        &self,
        other: &CanonicalLpElement,
        reference: Option<&MeasureVector>,
    ) -> Result<CanonicalLpElement> {
        self.check_compatible(other)?;
        let mu4 = reference.cloned().unwrap_or_else(|| self.common_reference(other));
        let a = self.reexpress(&mu4)?;
        let b = other.reexpress(&mu4)?;
        let f = a.f.iter().zip(&b.f).map(|(x, y)| x + y).collect();
        CanonicalLpElement::new(f, mu4, self.gamma)
    }

    pub fn scale(&self, lambda: f64) -> CanonicalLpElement {
        CanonicalLpElement {
            f: self.f.iter().map(|v| lambda * v).collect(),
            mu: self.mu.clone(),
            gamma: self.gamma,
        }
    }

    /// Lattice meet (atomwise min in a common reference).
    pub fn meet(
        &self,
        other: &CanonicalLpElement,
        reference: Option<&MeasureVector>,
    ) -> Result<CanonicalLpElement> {
        self.lattice_op(other, reference, f64::min)
    }

    /// Lattice join (atomwise max in a common reference).
    pub fn join(
        &self,
        other: &CanonicalLpElement,
        reference: Option<&MeasureVector>,
    ) -> Result<CanonicalLpElement> {
        self.lattice_op(other, reference, f64::max)
    }

    fn lattice_op(
        &self,
        other: &CanonicalLpElement,
        reference: Option<&MeasureVector>,
        op: fn(f64, f64) -> f64,
    ) -> Result<CanonicalLpElement> {
        self.check_compatible(other)?;
        let mu4 = reference.cloned().unwrap_or_else(|| self.common_reference(other));
        let a = self.reexpress(&mu4)?;
        let b = other.reexpress(&mu4)?;
        let f = a.f.iter().zip(&b.f).map(|(x, y)| op(*x, *y)).collect();
        CanonicalLpElement::new(f, mu4, self.gamma)
    }

    /// Class norm `‖fμ^γ‖ = (∫ μ |f|^{1/γ})^γ`, independent of the
    /// representative.
    pub fn norm(&self) -> f64 {
        let p = 1.0 / self.gamma;
        self.f
            .iter()
            .zip(self.mu.weights())
            .map(|(v, w)| w * v.abs().powf(p))
            .sum::<f64>()
            .powf(self.gamma)
    }

    /// Canonical integral `∫ x = ∫ μ f`, defined for γ = 1.
    pub fn integral(&self) -> Result<f64> {
        if (self.gamma - 1.0).abs() > 1e-15 {
            return Err(Error::ExponentMismatch {
                left: self.gamma,
                right: 1.0,
            });
        }
        Ok(self.f.iter().zip(self.mu.weights()).map(|(v, w)| v * w).sum())
    }

    /// Same equivalence class within an atomwise tolerance.
    pub fn equivalent(&self, other: &CanonicalLpElement, tol: f64) -> bool {
        if self.check_compatible(other).is_err() {
            return false;
        }
        match other.reexpress(&self.mu) {
            Ok(o) => self
                .f
                .iter()
                .zip(&o.f)
                .all(|(a, b)| (a - b).abs() <= tol * (1.0 + a.abs())),
            Err(_) => false,
        }
    }
}

/// Dual pairing `∫ x y` of classes with conjugate exponents γ and 1−γ
/// (the product class has γ = 1).
pub fn canonical_pairing(x: &CanonicalLpElement, y: &CanonicalLpElement) -> Result<f64> {
    if x.atoms() != y.atoms() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} atoms", x.atoms()),
            found: format!("{} atoms", y.atoms()),
        });
    }
    if (x.gamma + y.gamma - 1.0).abs() > 1e-12 {
        return Err(Error::ExponentMismatch {
            left: x.gamma,
            right: 1.0 - y.gamma,
        });
    }
    let mu4 = x.common_reference(y);
    let a = x.reexpress(&mu4)?;
    let b = y.reexpress(&mu4)?;
    Ok(a.f
        .iter()
        .zip(&b.f)
        .zip(mu4.weights())
        .map(|((u, v), w)| u * v * w)
        .sum())
}

/// The commutative matrix algebra `⊕_A M_1(C)` carried by a boolean
/// algebra: its projection lattice is `B`.
pub fn embed_algebra(b: &FiniteBooleanAlgebra) -> MatrixAlgebra {
    MatrixAlgebra::new(vec![(1, 1); b.atoms()]).unwrap()
}

/// A lattice element as a diagonal projection.
pub fn embed_element(b: &FiniteBooleanAlgebra, x: u64) -> AlgebraElement {
    let alg = embed_algebra(b);
    let mut el = AlgebraElement::zero(alg);
    for a in b.atoms_of(x) {
        el.blocks_mut()[a][(0, 0)] = cr(1.0);
    }
    el
}

/// A per-atom function as a diagonal element.
pub fn embed_function(b: &FiniteBooleanAlgebra, f: &[f64]) -> Result<AlgebraElement> {
    if f.len() != b.atoms() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} atoms", b.atoms()),
            found: format!("{}", f.len()),
        });
    }
    let alg = embed_algebra(b);
    let mut el = AlgebraElement::zero(alg);
    for (a, &v) in f.iter().enumerate() {
        el.blocks_mut()[a][(0, 0)] = cr(v);
    }
    Ok(el)
}

/// A finite measure as a state density against the canonical trace.
pub fn embed_measure(
    b: &FiniteBooleanAlgebra,
    mu: &MeasureVector,
    tol: &Tol,
) -> Result<StateDensity> {
    if mu.atoms() != b.atoms() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} atoms", b.atoms()),
            found: format!("{} atoms", mu.atoms()),
        });
    }
    if !mu.finite_on_atoms() {
        return Err(Error::InvalidInput("only finite measures embed as states".into()));
    }
    let el = embed_function(b, mu.weights())?;
    StateDensity::from_element(&el, TraceFlavor::Can, tol)
}
