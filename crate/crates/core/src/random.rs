//! Seeded random states and orthogonal matrices for sampling checks.

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, CMat, RMat, C64};
use crate::state::{BipartiteState, DensityMatrix};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_c<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_ket<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DVector<C64> {
    let v = DVector::from_fn(d, |_, _| gaussian_c(rng));
    let n = v.norm();
    v / c(n, 0.0)
}

/// Haar-random pure state.
pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    DensityMatrix::pure(&random_ket(d, rng)).expect("normalized ket is a valid state")
}

/// Hilbert-Schmidt random mixed state (`G G^dag / Tr`, `G` complex Ginibre).
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    let g = CMat::from_fn(d, d, |_, _| gaussian_c(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m / c(tr, 0.0)).expect("Ginibre product is positive")
}

pub fn random_bipartite<R: Rng + ?Sized>(dim_a: usize, dim_b: usize, rng: &mut R) -> BipartiteState {
    BipartiteState::new(dim_a, dim_b, random_density(dim_a * dim_b, rng)).expect("dims agree")
}

/// Random mixture of between 1 and `(dim_a dim_b)^2` product pure states.
pub fn random_separable<R: Rng + ?Sized>(dim_a: usize, dim_b: usize, rng: &mut R) -> BipartiteState {
    let max_terms = (dim_a * dim_b).pow(2);
    let terms = rng.random_range(1..=max_terms);
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let n = dim_a * dim_b;
    let mut m = CMat::zeros(n, n);
    for w in weights {
        let a = random_ket(dim_a, rng);
        let b = random_ket(dim_b, rng);
        let ab = a.kronecker(&b);
        m += (&ab * ab.adjoint()) * c(w / total, 0.0);
    }
    BipartiteState::from_matrix(dim_a, dim_b, m).expect("convex mixture of states")
}

/// Haar-random orthogonal matrix: QR of a Gaussian matrix with the sign of
/// `diag(R)` folded into `Q`.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RMat {
    let g = RMat::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}
