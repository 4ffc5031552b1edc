//! Symmetrized covariance matrices and the bipartite block form
//! `gamma = [[A, C], [C^T, B]]` over local observable sets.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, RMat, RANK_CUTOFF};
use crate::loo::ObservableSet;
use crate::state::{BipartiteState, DensityMatrix, Party};

/// Kernel containment residual allowed before blocks count as malformed.
pub const KERNEL_TOL: f64 = 1e-7;

fn real_expectation(rho: &CMat, op: &CMat) -> Result<f64> {
    let v = linalg::trace_product(rho, op);
    if v.im.abs() > 1e-9 {
        return Err(Error::ImaginaryExpectation { imag: v.im });
    }
    Ok(v.re)
}

/// `gamma_ij = <(O_i O_j + O_j O_i)/2> - <O_i><O_j>` for any list of
/// Hermitian observables on the space of `rho`.
pub fn covariance_of(rho: &DensityMatrix, observables: &[CMat]) -> Result<RMat> {
    let m = rho.matrix();
    for o in observables {
        if o.shape() != m.shape() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: o.nrows(),
            });
        }
    }
    let means = observables
        .iter()
        .map(|o| real_expectation(m, o))
        .collect::<Result<Vec<_>>>()?;
    let n = observables.len();
    let mut gamma = RMat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let (oi, oj) = (&observables[i], &observables[j]);
            let sym = (oi * oj + oj * oi) * linalg::c(0.5, 0.0);
            let v = real_expectation(m, &sym)? - means[i] * means[j];
            gamma[(i, j)] = v;
            gamma[(j, i)] = v;
        }
    }
    Ok(gamma)
}

pub fn covariance_matrix(rho: &DensityMatrix, set: &ObservableSet) -> Result<RMat> {
    if set.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: set.dim(),
        });
    }
    covariance_of(rho, set.observables())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceBlocks {
    pub dim_a: usize,
    pub dim_b: usize,
    /// Covariance of Alice's observables on `rho_A`.
    pub a: RMat,
    /// Covariance of Bob's observables on `rho_B`.
    pub b: RMat,
    /// Cross correlations `C_kl = <A_k x B_l> - <A_k><B_l>`.
    pub c: RMat,
    pub mean_a: DVector<f64>,
    pub mean_b: DVector<f64>,
}

impl CovarianceBlocks {
    pub fn assembled(&self) -> RMat {
        let (na, nb) = (self.a.nrows(), self.b.nrows());
        let mut g = RMat::zeros(na + nb, na + nb);
        g.view_mut((0, 0), (na, na)).copy_from(&self.a);
        g.view_mut((na, na), (nb, nb)).copy_from(&self.b);
        g.view_mut((0, na), (na, nb)).copy_from(&self.c);
        g.view_mut((na, 0), (nb, na)).copy_from(&self.c.transpose());
        g
    }

    /// Exchange the roles of the two parties.
    pub fn swapped(&self) -> Self {
        Self {
            dim_a: self.dim_b,
            dim_b: self.dim_a,
            a: self.b.clone(),
            b: self.a.clone(),
            c: self.c.transpose(),
            mean_a: self.mean_b.clone(),
            mean_b: self.mean_a.clone(),
        }
    }

    /// Blocks for the rotated sets `O_A A_k`, `O_B B_k`.
    pub fn rotated(&self, rot_a: &RMat, rot_b: &RMat) -> Self {
        Self {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            a: rot_a * &self.a * rot_a.transpose(),
            b: rot_b * &self.b * rot_b.transpose(),
            c: rot_a * &self.c * rot_b.transpose(),
            mean_a: rot_a * &self.mean_a,
            mean_b: rot_b * &self.mean_b,
        }
    }

    pub fn trace_a(&self) -> f64 {
        self.a.trace()
    }

    pub fn trace_b(&self) -> f64 {
        self.b.trace()
    }

    /// Largest `|C^T v|` over the numerical null vectors `v` of `A`. Zero if
    /// `A` has full rank.
    pub fn kernel_residual(&self) -> f64 {
        let eig = nalgebra::SymmetricEigen::new((&self.a + self.a.transpose()) * 0.5);
        let scale = eig.eigenvalues.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let ct = self.c.transpose();
        let mut worst = 0.0_f64;
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda.abs() <= RANK_CUTOFF * scale || scale == 0.0 {
                worst = worst.max((&ct * eig.eigenvectors.column(k)).norm());
            }
        }
        worst
    }

    pub fn check_kernel_containment(&self) -> Result<()> {
        let residual = self.kernel_residual();
        if residual > KERNEL_TOL {
            return Err(Error::MalformedBlocks { residual });
        }
        Ok(())
    }
}

/// Covariance blocks of `state` for the observables `{A_k x 1, 1 x B_l}`.
pub fn bipartite_blocks(
    state: &BipartiteState,
    loo_a: &ObservableSet,
    loo_b: &ObservableSet,
) -> Result<CovarianceBlocks> {
    if loo_a.dim() != state.dim_a() {
        return Err(Error::DimensionMismatch {
            expected: state.dim_a(),
            got: loo_a.dim(),
        });
    }
    if loo_b.dim() != state.dim_b() {
        return Err(Error::DimensionMismatch {
            expected: state.dim_b(),
            got: loo_b.dim(),
        });
    }
    let rho_a = state.reduced(Party::A);
    let rho_b = state.reduced(Party::B);
    let a = covariance_of(&rho_a, loo_a.observables())?;
    let b = covariance_of(&rho_b, loo_b.observables())?;
    let mean_a = DVector::from_vec(loo_a.expectations(&rho_a)?);
    let mean_b = DVector::from_vec(loo_b.expectations(&rho_b)?);
    let joint = state.matrix();
    let mut c = RMat::zeros(loo_a.len(), loo_b.len());
    for (k, ak) in loo_a.iter().enumerate() {
        for (l, bl) in loo_b.iter().enumerate() {
            let corr = real_expectation(joint, &linalg::kron(ak, bl))?;
            c[(k, l)] = corr - mean_a[k] * mean_b[l];
        }
    }
    Ok(CovarianceBlocks {
        dim_a: state.dim_a(),
        dim_b: state.dim_b(),
        a,
        b,
        c,
        mean_a,
        mean_b,
    })
}

/// Blocks over the canonical Gell-Mann LOO sets of both parties.
pub fn canonical_blocks(state: &BipartiteState) -> Result<CovarianceBlocks> {
    let loo_a = crate::loo::gell_mann_loos(state.dim_a())?;
    let loo_b = crate::loo::gell_mann_loos(state.dim_b())?;
    bipartite_blocks(state, &loo_a, &loo_b)
}
