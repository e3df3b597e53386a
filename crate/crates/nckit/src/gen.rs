//! Seeded random model for verification and tests.
//!
//! Elements get independent complex Gaussian entries. Faithful states are
//! `h = g*g + εI` normalized, with the documented floor `ε = 1e-3` keeping
//! spectra away from zero so that acceptance numbers are reproducible.

use crate::algebra::{AlgebraElement, MatrixAlgebra};
use crate::la::{c, cr, herm_eig, CMat};
use crate::states::{StateDensity, TraceFlavor};
use crate::tol::Tol;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Faithfulness floor for random states.
pub const FAITHFUL_FLOOR: f64 = 1e-3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn cnormal(rng: &mut impl Rng) -> crate::la::C64 {
    c(normal(rng), normal(rng))
}

fn random_block(n: usize, rng: &mut impl Rng) -> CMat {
    CMat::from_fn(n, n, |_, _| cnormal(rng))
}

/// Element with independent standard complex Gaussian entries.
pub fn random_element(alg: &MatrixAlgebra, rng: &mut impl Rng) -> AlgebraElement {
    let blocks = alg.blocks().iter().map(|b| random_block(b.dim, rng)).collect();
    AlgebraElement::new(alg.clone(), blocks).unwrap()
}

pub fn random_hermitian(alg: &MatrixAlgebra, rng: &mut impl Rng) -> AlgebraElement {
    let g = random_element(alg, rng);
    g.add(&g.adjoint()).scale_re(0.5)
}

pub fn random_psd(alg: &MatrixAlgebra, rng: &mut impl Rng) -> AlgebraElement {
    let g = random_element(alg, rng);
    g.adjoint().mul(&g)
}

/// Haar-ish unitary from the QR factor of a Gaussian matrix.
pub fn random_unitary(alg: &MatrixAlgebra, rng: &mut impl Rng) -> AlgebraElement {
    let blocks = alg
        .blocks()
        .iter()
        .map(|b| {
            let g = random_block(b.dim, rng);
            g.qr().q()
        })
        .collect();
    AlgebraElement::new(alg.clone(), blocks).unwrap()
}

/// Projection of the given per-block ranks (clamped to the block size).
pub fn random_projection(alg: &MatrixAlgebra, ranks: &[usize], rng: &mut impl Rng) -> AlgebraElement {
    let blocks = alg
        .blocks()
        .iter()
        .zip(ranks)
        .map(|(b, &r)| {
            let h = random_block(b.dim, rng);
            let h = (&h + h.adjoint()) * cr(0.5);
            let (_, vecs) = herm_eig(&h);
            let r = r.min(b.dim);
            let mut p = CMat::zeros(b.dim, b.dim);
            for i in 0..r {
                let v = vecs.column(i);
                p += v * v.adjoint();
            }
            p
        })
        .collect();
    AlgebraElement::new(alg.clone(), blocks).unwrap()
}

/// Faithful state with density `(g*g + εI) / Σtr`, `ε = 1e-3`.
pub fn random_faithful_state(alg: &MatrixAlgebra, rng: &mut impl Rng) -> StateDensity {
    let g = random_psd(alg, rng);
    let id = AlgebraElement::identity(alg.clone());
    let h = g.add(&id.scale_re(FAITHFUL_FLOOR));
    let total = h.trace_can().re;
    let h = h.scale_re(1.0 / total);
    StateDensity::from_element(&h, TraceFlavor::Can, &Tol::default()).unwrap()
}

/// Normalized state of per-block rank `ranks[k]` (possibly non-faithful).
pub fn random_state_with_ranks(
    alg: &MatrixAlgebra,
    ranks: &[usize],
    rng: &mut impl Rng,
) -> StateDensity {
    let blocks: Vec<CMat> = alg
        .blocks()
        .iter()
        .zip(ranks)
        .map(|(b, &r)| {
            let r = r.min(b.dim);
            if r == 0 {
                return CMat::zeros(b.dim, b.dim);
            }
            let g = CMat::from_fn(b.dim, r, |_, _| cnormal(rng));
            &g * g.adjoint()
        })
        .collect();
    let el = AlgebraElement::new(alg.clone(), blocks).unwrap();
    let total = el.trace_can().re;
    let el = el.scale_re(1.0 / total);
    StateDensity::from_element(&el, TraceFlavor::Can, &Tol::default()).unwrap()
}

/// Strictly positive atom weights in `[0.1, 2.1)`.
pub fn random_measure_weights(atoms: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..atoms).map(|_| 0.1 + 2.0 * rng.random::<f64>()).collect()
}
