//! Numerical tolerances shared across the toolkit.

/// Tolerance bundle used by predicates, spectral thresholds and
/// precondition checks. All fields are overridable per call site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol {
    /// Relative tolerance for structural identities (hermiticity,
    /// reconstruction residuals, projection axioms).
    pub spec: f64,
    /// Relative threshold below which spectrum is treated as zero
    /// (supports, pseudo-inverses, rank decisions).
    pub supp: f64,
    /// Absolute eigenvalue-clustering gap after normalization by the
    /// operator norm.
    pub cluster: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            spec: 1e-10,
            supp: 1e-10,
            cluster: 1e-8,
        }
    }
}

impl Tol {
    pub fn with_spec(mut self, spec: f64) -> Self {
        self.spec = spec;
        self
    }

    pub fn with_supp(mut self, supp: f64) -> Self {
        self.supp = supp;
        self
    }

    pub fn with_cluster(mut self, cluster: f64) -> Self {
        self.cluster = cluster;
        self
    }
}

/// Normalization check threshold for states (`Σ tr h = 1`).
pub const NORMALIZATION_TOL: f64 = 1e-12;
