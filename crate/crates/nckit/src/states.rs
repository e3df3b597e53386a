//! Normal positive functionals and finite weights as block densities.
//!
//! A state (or finite weight) is a family of PSD densities `h_k` with
//! `φ(x) = Σ_k w_k tr(h_k x_k)` against the canonical (`w_k = 1`) or
//! represented (`w_k = m_k`) trace. General linear functionals carry
//! unconstrained coefficient blocks and decompose polarly as
//! `φ(·) = |φ|(· v)`.

use crate::algebra::{polar_decompose, AlgebraElement, MatrixAlgebra};
use crate::error::Error;
use crate::la::{singular_values, C64};
use crate::tol::{Tol, NORMALIZATION_TOL};
use crate::Result;

/// Which trace the density blocks pair against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFlavor {
    /// Canonical trace `τ(x) = Σ_k tr(x_k)`.
    Can,
    /// Represented trace `τ(x) = Σ_k m_k tr(x_k)`.
    Rep,
}

impl TraceFlavor {
    pub fn weight(&self, alg: &MatrixAlgebra, block: usize) -> f64 {
        match self {
            TraceFlavor::Can => 1.0,
            TraceFlavor::Rep => alg.blocks()[block].mult as f64,
        }
    }
}

/// Positive normal functional `φ(x) = Σ_k w_k tr(h_k x_k)` with PSD
/// densities. Weights collapse to states at finite dimension; a faithful
/// flag distinguishes `W_0` from `W`.
#[derive(Debug, Clone)]
pub struct StateDensity {
    density: AlgebraElement,
    flavor: TraceFlavor,
}

impl StateDensity {
    /// Validates PSD within `ε_spec` relative to the density norm.
    pub fn from_element(h: &AlgebraElement, flavor: TraceFlavor, tol: &Tol) -> Result<Self> {
        let defect = h.hermiticity_defect();
        if defect > tol.spec {
            return Err(Error::NotHermitian { residual: defect });
        }
        let min = h.min_eigenvalue();
        if min < -tol.spec * h.operator_norm().max(1e-300) {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(StateDensity {
            density: h.add(&h.adjoint()).scale_re(0.5),
            flavor,
        })
    }

    /// Tracial state `h = I / dim` for the given flavor.
    pub fn tracial(alg: &MatrixAlgebra, flavor: TraceFlavor) -> Self {
        let id = AlgebraElement::identity(alg.clone());
        let total: f64 = alg
            .blocks()
            .iter()
            .enumerate()
            .map(|(k, b)| flavor.weight(alg, k) * b.dim as f64)
            .sum();
        StateDensity {
            density: id.scale_re(1.0 / total),
            flavor,
        }
    }

    pub fn algebra(&self) -> &MatrixAlgebra {
        self.density.algebra()
    }

    pub fn flavor(&self) -> TraceFlavor {
        self.flavor
    }

    /// Raw density blocks as an element (relative to the stored flavor).
    pub fn density(&self) -> &AlgebraElement {
        &self.density
    }

    /// Evaluation `φ(x)`.
    pub fn evaluate(&self, x: &AlgebraElement) -> Result<C64> {
        if x.algebra() != self.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        let mut out = C64::new(0.0, 0.0);
        for (k, (h, xb)) in self.density.blocks().iter().zip(x.blocks()).enumerate() {
            let w = self.flavor.weight(self.algebra(), k);
            out += (h * xb).trace() * C64::new(w, 0.0);
        }
        Ok(out)
    }

    /// `‖φ‖ = φ(I)` for positive functionals.
    pub fn norm(&self) -> f64 {
        let id = AlgebraElement::identity(self.algebra().clone());
        self.evaluate(&id).unwrap().re
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORMALIZATION_TOL
    }

    /// Faithful iff every block density is positive definite above the
    /// support threshold.
    pub fn is_faithful(&self, tol: &Tol) -> bool {
        let norm = self.density.operator_norm();
        if norm == 0.0 {
            return false;
        }
        self.density.min_eigenvalue() > tol.supp * norm
    }

    /// Support projection of the density.
    pub fn support(&self, tol: &Tol) -> AlgebraElement {
        self.density.support_projection(tol).expect("density is hermitian")
    }

    /// The unique positive `h` with `φ(y) = τ(h y)` for the requested
    /// trace flavor (Dye–Segal density). Converting `can → rep` divides
    /// block `k` by `m_k`.
    pub fn dye_segal_density(&self, flavor: TraceFlavor) -> AlgebraElement {
        let alg = self.algebra().clone();
        let blocks = self
            .density
            .blocks()
            .iter()
            .enumerate()
            .map(|(k, h)| {
                let ratio = self.flavor.weight(&alg, k) / flavor.weight(&alg, k);
                h * C64::new(ratio, 0.0)
            })
            .collect();
        AlgebraElement::new(alg, blocks).unwrap()
    }

    /// The same functional expressed against the other trace flavor.
    pub fn with_flavor(&self, flavor: TraceFlavor) -> StateDensity {
        StateDensity {
            density: self.dye_segal_density(flavor),
            flavor,
        }
    }

    pub fn scaled(&self, lambda: f64) -> StateDensity {
        assert!(lambda >= 0.0, "states scale by nonnegative reals");
        StateDensity {
            density: self.density.scale_re(lambda),
            flavor: self.flavor,
        }
    }

    /// Pointwise sum (same flavor enforced by conversion).
    pub fn add(&self, other: &StateDensity) -> Result<StateDensity> {
        if other.algebra() != self.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        let o = other.with_flavor(self.flavor);
        Ok(StateDensity {
            density: self.density.add(&o.density),
            flavor: self.flavor,
        })
    }

    pub fn as_functional(&self) -> LinearFunctional {
        LinearFunctional {
            coeffs: self.dye_segal_density(TraceFlavor::Can),
        }
    }
}

/// General (not necessarily positive) normal linear functional
/// `φ(x) = Σ_k tr(c_k x_k)` in the canonical pairing.
#[derive(Debug, Clone)]
pub struct LinearFunctional {
    coeffs: AlgebraElement,
}

impl LinearFunctional {
    pub fn new(coeffs: AlgebraElement) -> Self {
        LinearFunctional { coeffs }
    }

    pub fn algebra(&self) -> &MatrixAlgebra {
        self.coeffs.algebra()
    }

    pub fn coefficients(&self) -> &AlgebraElement {
        &self.coeffs
    }

    pub fn evaluate(&self, x: &AlgebraElement) -> Result<C64> {
        if x.algebra() != self.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(self
            .coeffs
            .blocks()
            .iter()
            .zip(x.blocks())
            .map(|(c, xb)| (c * xb).trace())
            .sum())
    }

    pub fn is_self_adjoint(&self, tol: &Tol) -> bool {
        self.coeffs.is_self_adjoint(tol)
    }

    /// Functional norm: trace norm of the coefficient blocks.
    pub fn norm(&self) -> f64 {
        self.coeffs
            .blocks()
            .iter()
            .map(|c| singular_values(c).iter().sum::<f64>())
            .sum()
    }

    pub fn sub(&self, other: &LinearFunctional) -> LinearFunctional {
        LinearFunctional {
            coeffs: self.coeffs.sub(&other.coeffs),
        }
    }
}

/// Polar decomposition of a functional: `φ(x) = |φ|(x v)` with `|φ|`
/// positive, `‖|φ|‖ = ‖φ‖` and `supp(|φ|) = v*v`. Computed from the polar
/// decomposition `c = v |c|` of the coefficient blocks.
pub fn functional_polar(
    phi: &LinearFunctional,
    tol: &Tol,
) -> (StateDensity, AlgebraElement) {
    let (v, abs) = polar_decompose(phi.coefficients(), tol);
    let state = StateDensity::from_element(&abs, TraceFlavor::Can, tol)
        .expect("|c| is PSD by construction");
    (state, v)
}

/// `ω ≪ φ` iff `supp(ω) ≤ supp(φ)`, decided by `P_ω P_φ = P_ω`.
pub fn absolutely_continuous(
    omega: &StateDensity,
    phi: &StateDensity,
    tol: &Tol,
) -> Result<bool> {
    if omega.algebra() != phi.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let po = omega.support(tol);
    let pp = phi.support(tol);
    Ok(po.mul(&pp).sub(&po).operator_norm() <= tol.spec)
}
