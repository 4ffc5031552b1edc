//! Local orthogonal observables (LOOs): `d^2` Hermitian matrices that are
//! orthonormal under the Hilbert-Schmidt inner product `Tr(O_k O_l)`.

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, RMat};
use crate::state::DensityMatrix;

pub const HERMITIAN_TOL: f64 = 1e-9;
pub const ORTHONORMAL_TOL: f64 = 1e-9;
pub const COMPLETENESS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSet {
    dim: usize,
    observables: Vec<CMat>,
}

impl ObservableSet {
    /// Validate a full LOO set: `dim^2` Hermitian, orthonormal, complete.
    pub fn new(dim: usize, observables: Vec<CMat>) -> Result<Self> {
        check_loo(dim, &observables)?;
        Ok(Self { dim, observables })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }

    pub fn observables(&self) -> &[CMat] {
        &self.observables
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CMat> {
        self.observables.iter()
    }

    /// Vector of expectations `<O_k>` in `rho`.
    pub fn expectations(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        self.observables.iter().map(|o| expectation(rho, o)).collect()
    }

    /// Rebuild `rho = sum_k <O_k> O_k`.
    pub fn reconstruct(&self, rho: &DensityMatrix) -> Result<CMat> {
        let mut out = CMat::zeros(self.dim, self.dim);
        for o in &self.observables {
            out += o * c(expectation(rho, o)?, 0.0);
        }
        Ok(out)
    }
}

/// Check the three LOO invariants on an arbitrary list of matrices.
pub fn check_loo(dim: usize, observables: &[CMat]) -> Result<()> {
    if observables.len() != dim * dim {
        return Err(Error::InvalidObservableSet {
            invariant: "cardinality d^2",
            deviation: (observables.len() as f64 - (dim * dim) as f64).abs(),
        });
    }
    for o in observables {
        if o.shape() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: o.nrows(),
            });
        }
        let deviation = linalg::hermitian_deviation(o);
        if deviation > HERMITIAN_TOL {
            return Err(Error::InvalidObservableSet {
                invariant: "Hermiticity",
                deviation,
            });
        }
    }
    let mut worst = 0.0_f64;
    for (k, ok) in observables.iter().enumerate() {
        for (l, ol) in observables.iter().enumerate() {
            let target = if k == l { 1.0 } else { 0.0 };
            worst = worst.max((linalg::trace_product(ok, ol) - c(target, 0.0)).norm());
        }
    }
    if worst > ORTHONORMAL_TOL {
        return Err(Error::InvalidObservableSet {
            invariant: "Hilbert-Schmidt orthonormality",
            deviation: worst,
        });
    }
    let mut sum_sq = CMat::zeros(dim, dim);
    for o in observables {
        sum_sq += o * o;
    }
    let deviation = (sum_sq - linalg::identity(dim) * c(dim as f64, 0.0)).camax();
    if deviation > COMPLETENESS_TOL {
        return Err(Error::InvalidObservableSet {
            invariant: "completeness",
            deviation,
        });
    }
    Ok(())
}

/// The generalized Gell-Mann LOO set, in this order: diagonal projectors
/// `|j><j|`, symmetric `(|j><k| + |k><j|)/sqrt2` for `j < k`, then
/// antisymmetric `(-i|j><k| + i|k><j|)/sqrt2` for `j < k`.
pub fn gell_mann_loos(d: usize) -> Result<ObservableSet> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut obs = Vec::with_capacity(d * d);
    for j in 0..d {
        let mut m = CMat::zeros(d, d);
        m[(j, j)] = c(1.0, 0.0);
        obs.push(m);
    }
    for j in 0..d {
        for k in j + 1..d {
            let mut m = CMat::zeros(d, d);
            m[(j, k)] = c(s, 0.0);
            m[(k, j)] = c(s, 0.0);
            obs.push(m);
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            let mut m = CMat::zeros(d, d);
            m[(j, k)] = c(0.0, -s);
            m[(k, j)] = c(0.0, s);
            obs.push(m);
        }
    }
    ObservableSet::new(d, obs)
}

/// `O~_l = sum_k R_lk O_k` for a real orthogonal `R`.
pub fn rotate_loos(set: &ObservableSet, rotation: &RMat) -> Result<ObservableSet> {
    let n = set.len();
    if rotation.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rotation.nrows(),
        });
    }
    let deviation = linalg::orthogonality_deviation(rotation);
    if deviation > 1e-9 {
        return Err(Error::NonOrthogonalRotation { deviation });
    }
    let rotated = (0..n)
        .map(|l| {
            let mut m = CMat::zeros(set.dim, set.dim);
            for (k, o) in set.observables.iter().enumerate() {
                let r = rotation[(l, k)];
                if r != 0.0 {
                    m += o * c(r, 0.0);
                }
            }
            m
        })
        .collect();
    ObservableSet::new(set.dim, rotated)
}

/// `Tr(rho O)`; fails if the imaginary part exceeds 1e-8.
pub fn expectation(rho: &DensityMatrix, observable: &CMat) -> Result<f64> {
    expectation_raw(rho.matrix(), observable)
}

pub(crate) fn expectation_raw(rho: &CMat, observable: &CMat) -> Result<f64> {
    if observable.shape() != rho.shape() {
        return Err(Error::DimensionMismatch {
            expected: rho.nrows(),
            got: observable.nrows(),
        });
    }
    let v = linalg::trace_product(rho, observable);
    if v.im.abs() > 1e-8 {
        return Err(Error::ImaginaryExpectation { imag: v.im });
    }
    Ok(v.re)
}

/// Rotation that maps the canonical qubit set to `{I, sigma_x, sigma_y, sigma_z} / sqrt2`.
pub fn qubit_pauli_rotation() -> RMat {
    // canonical order: |0><0|, |1><1|, sx/sqrt2, sy/sqrt2
    let s = std::f64::consts::FRAC_1_SQRT_2;
    RMat::from_row_slice(4, 4, &[s, s, 0., 0., 0., 0., 1., 0., 0., 0., 0., 1., s, -s, 0., 0.])
}
