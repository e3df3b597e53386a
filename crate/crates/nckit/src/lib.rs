//! Numerical toolkit for finite-dimensional W*-algebras.
//!
//! A finite-dimensional W*-algebra is a direct sum of full complex matrix
//! blocks `⊕_k M_{n_k}(C)`, represented on `⊕_k (C^{n_k} ⊗ C^{m_k})` with
//! multiplicities `m_k`. On this desk-scale substrate every construction of
//! noncommutative integration theory is exactly computable: GNS
//! representations, Tomita–Takesaki modular operators and flows, Connes
//! cocycles and their analytic continuation, Pedersen–Takesaki densities,
//! standard liouvilleans, trace Lp and Orlicz norms with Luxemburg gauges,
//! and the commutative sector realized by finite boolean algebras with
//! measures, Radon–Nikodym quotients and canonical measure-free Lp classes.
//!
//! Everything is pure and immutable: operations are functions of their
//! inputs, safe to share and evaluate in parallel.

pub mod algebra;
pub mod boolean;
pub mod error;
pub mod gen;
pub mod io;
pub mod la;
pub mod lp;
pub mod modular;
pub mod orlicz;
pub mod states;
pub mod tol;
pub mod verify;

pub use algebra::{
    center_and_classify, commutant, pinch_expectation, polar_decompose, spectral_decompose,
    AlgebraElement, MatrixAlgebra, SpectralData,
};
pub use error::Error;
pub use la::{C64, CMat};
pub use lp::{duality_pair, holder_extremal, lp_norm, mazur, rearrangement, StepFunction, TraceSpec};
pub use modular::{
    cocycle_analytic, connes_cocycle, gns, kms_check, kms_check_with_flow, modular_flow,
    modular_operator, pedersen_takesaki, relative_modular, standard_liouvillean, GnsData,
    KmsReport, Liouvillean, ModularData, PtOutcome, RelativeModular, StandardForm,
};
pub use orlicz::{
    luxemburg_norm, orlicz_modular, young_inequality_check, Delta2Mode, Delta2Report,
    OrliczFunction, Tail,
};
pub use states::{
    absolutely_continuous, functional_polar, LinearFunctional, StateDensity, TraceFlavor,
};
pub use tol::Tol;

/// Library result type.
pub type Result<T> = std::result::Result<T, Error>;
