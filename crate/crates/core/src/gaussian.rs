//! Gaussian continuous-variable steering test on quadrature covariance matrices.
//!
//! Quadratures are `X = (a + a^dag)/sqrt2`, `P = -i(a - a^dag)/sqrt2`, so the
//! vacuum has variance 1/2 and each mode's symplectic block is
//! `(1/2) [[0, 1], [-1, 0]]`. Ordering is `(x_A1, p_A1, ..., x_B1, p_B1, ...)`.

use serde::{Deserialize, Serialize};

use crate::criteria::{Criterion, Direction, SteeringVerdict};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, RMat};

pub const SYMMETRY_TOL: f64 = 1e-9;
pub const PHYSICAL_TOL: f64 = 1e-8;

/// `(+)_{i=1}^{n} (1/2) [[0, 1], [-1, 0]]`.
pub fn symplectic_form(modes: usize) -> RMat {
    let mut omega = RMat::zeros(2 * modes, 2 * modes);
    for i in 0..modes {
        omega[(2 * i, 2 * i + 1)] = 0.5;
        omega[(2 * i + 1, 2 * i)] = -0.5;
    }
    omega
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianCM {
    modes_a: usize,
    modes_b: usize,
    gamma: RMat,
}

impl GaussianCM {
    pub fn new(modes_a: usize, modes_b: usize, gamma: RMat) -> Result<Self> {
        if modes_a == 0 || modes_b == 0 {
            return Err(Error::Parse("each party needs at least one mode".into()));
        }
        let n = 2 * (modes_a + modes_b);
        if gamma.shape() != (n, n) {
            return Err(Error::Parse(format!(
                "gamma is {}x{}, expected {n}x{n} for {modes_a}+{modes_b} modes",
                gamma.nrows(),
                gamma.ncols()
            )));
        }
        let asym = (&gamma - gamma.transpose()).amax();
        if asym > SYMMETRY_TOL {
            return Err(Error::Unphysical(format!(
                "gamma not symmetric (max asymmetry {asym:.3e})"
            )));
        }
        let gamma = (&gamma + gamma.transpose()) * 0.5;
        let omega = symplectic_form(modes_a + modes_b);
        let h = linalg::real_to_complex(&gamma) + omega.map(|x| c(0.0, x));
        let min = linalg::min_hermitian_eigenvalue(&h);
        if min < -PHYSICAL_TOL {
            return Err(Error::Unphysical(format!("gamma + i Omega has eigenvalue {min:.3e}")));
        }
        Ok(Self {
            modes_a,
            modes_b,
            gamma,
        })
    }

    /// `gamma_A (+) gamma_B`.
    pub fn product(modes_a: usize, gamma_a: &RMat, modes_b: usize, gamma_b: &RMat) -> Result<Self> {
        let (na, nb) = (gamma_a.nrows(), gamma_b.nrows());
        let mut g = RMat::zeros(na + nb, na + nb);
        g.view_mut((0, 0), (na, na)).copy_from(gamma_a);
        g.view_mut((na, na), (nb, nb)).copy_from(gamma_b);
        Self::new(modes_a, modes_b, g)
    }

    pub fn vacuum(modes_a: usize, modes_b: usize) -> Self {
        let n = 2 * (modes_a + modes_b);
        Self::new(modes_a, modes_b, RMat::identity(n, n) * 0.5).expect("vacuum is physical")
    }

    /// Two-mode squeezed vacuum with squeezing `r`:
    /// `A = B = cosh(2r)/2 I`, `C = sinh(2r)/2 diag(1, -1)`.
    pub fn two_mode_squeezed_vacuum(r: f64) -> Self {
        let (ch, sh) = ((2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0);
        let gamma = RMat::from_row_slice(
            4,
            4,
            &[ch, 0., sh, 0., 0., ch, 0., -sh, sh, 0., ch, 0., 0., -sh, 0., ch],
        );
        Self::new(1, 1, gamma).expect("TMSV is physical")
    }

    pub fn modes_a(&self) -> usize {
        self.modes_a
    }

    pub fn modes_b(&self) -> usize {
        self.modes_b
    }

    pub fn gamma(&self) -> &RMat {
        &self.gamma
    }

    /// `gamma - (0_A (+) i Omega_B)` for `A->B`, or `gamma - (i Omega_A (+) 0_B)` for `B->A`.
    pub fn steering_matrix(&self, direction: Direction) -> CMat {
        let na = 2 * self.modes_a;
        let mut shift = CMat::zeros(self.gamma.nrows(), self.gamma.ncols());
        let (offset, modes) = match direction {
            Direction::AToB => (na, self.modes_b),
            Direction::BToA => (0, self.modes_a),
        };
        let omega = symplectic_form(modes).map(|x| c(0.0, x));
        shift
            .view_mut((offset, offset), (2 * modes, 2 * modes))
            .copy_from(&omega);
        linalg::real_to_complex(&self.gamma) - shift
    }

    /// Apply the local transformation `S_A (+) S_B`.
    pub fn transformed(&self, s_a: &RMat, s_b: &RMat) -> Result<Self> {
        let (na, nb) = (s_a.nrows(), s_b.nrows());
        let mut s = RMat::zeros(na + nb, na + nb);
        s.view_mut((0, 0), (na, na)).copy_from(s_a);
        s.view_mut((na, na), (nb, nb)).copy_from(s_b);
        Self::new(self.modes_a, self.modes_b, &s * &self.gamma * s.transpose())
    }
}

/// Steerable in `direction` iff `gamma - (0 (+) i Omega_steered)` has an
/// eigenvalue below `-1e-9`. `lhs` is minus the minimum eigenvalue.
pub fn prop3(cm: &GaussianCM, direction: Direction) -> SteeringVerdict {
    let min = linalg::min_hermitian_eigenvalue(&cm.steering_matrix(direction));
    SteeringVerdict::upper_bounded(Criterion::Gaussian, direction, -min, 0.0)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GaussianDoc {
    #[serde(rename = "modesA")]
    pub modes_a: usize,
    #[serde(rename = "modesB")]
    pub modes_b: usize,
    pub gamma: Vec<Vec<f64>>,
}

pub fn read_gaussian_cm(json: &str) -> Result<GaussianCM> {
    let doc: GaussianDoc = serde_json::from_str(json)?;
    let n = doc.gamma.len();
    if doc.gamma.iter().any(|row| row.len() != n) {
        return Err(Error::Parse("gamma must be a square array".into()));
    }
    let gamma = RMat::from_fn(n, n, |i, j| doc.gamma[i][j]);
    GaussianCM::new(doc.modes_a, doc.modes_b, gamma)
}

pub fn write_gaussian_cm(cm: &GaussianCM) -> String {
    let n = cm.gamma.nrows();
    let doc = GaussianDoc {
        modes_a: cm.modes_a,
        modes_b: cm.modes_b,
        gamma: (0..n).map(|i| (0..n).map(|j| cm.gamma[(i, j)]).collect()).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::seeded_rng;
    use rand::Rng;

    fn rotation(theta: f64) -> RMat {
        RMat::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])
    }

    fn squeezer(s: f64) -> RMat {
        RMat::from_row_slice(2, 2, &[s.exp(), 0.0, 0.0, (-s).exp()])
    }

    fn thermal(nbar: f64) -> RMat {
        RMat::identity(2, 2) * (nbar + 0.5)
    }

    // Schur complement of the trusted-free block: sign of the smallest
    // eigenvalue of (B - i Omega_B) - C^T A^{-1} C, valid when A > 0.
    fn schur_oracle_min(cm: &GaussianCM) -> f64 {
        let na = 2 * cm.modes_a();
        let nb = 2 * cm.modes_b();
        let g = cm.gamma();
        let a = g.view((0, 0), (na, na)).into_owned();
        let b = g.view((na, na), (nb, nb)).into_owned();
        let cc = g.view((0, na), (na, nb)).into_owned();
        let schur = b - cc.transpose() * a.try_inverse().unwrap() * cc;
        let m = linalg::real_to_complex(&schur) - symplectic_form(cm.modes_b()).map(|x| c(0.0, x));
        linalg::min_hermitian_eigenvalue(&m)
    }

    #[test]
    fn symplectic_form_examples() {
        let one = symplectic_form(1);
        assert_eq!(one, RMat::from_row_slice(2, 2, &[0.0, 0.5, -0.5, 0.0]));
        let two = symplectic_form(2);
        assert_eq!(two.shape(), (4, 4));
        assert_eq!(two.view((2, 2), (2, 2)).into_owned(), one);
        assert_eq!(two[(0, 2)], 0.0);
        assert_eq!(two.transpose(), -two);
    }

    #[test]
    fn vacuum_not_violated() {
        let v = prop3(&GaussianCM::vacuum(1, 1), Direction::AToB);
        assert!(v.lhs.abs() < 1e-12);
        assert!(!v.violated);
    }

    #[test]
    fn tmsv_violates_both_ways_and_matches_schur_sign() {
        for r in [0.1, 0.5, 1.0] {
            let cm = GaussianCM::two_mode_squeezed_vacuum(r);
            for dir in Direction::BOTH {
                let v = prop3(&cm, dir);
                assert!(v.violated, "r = {r}, {dir}");
            }
            let oracle = schur_oracle_min(&cm);
            let expected = 1.0 / (2.0 * (2.0 * r).cosh()) - 0.5;
            assert!((oracle - expected).abs() < 1e-12);
            assert!(oracle < 0.0);
        }
    }

    #[test]
    fn product_states_not_violated() {
        let mut rng = seeded_rng(31);
        for _ in 0..20 {
            let sa = squeezer(rng.random_range(-1.0..1.0)) * rotation(rng.random_range(0.0..6.3));
            let ga = &sa * thermal(rng.random_range(0.0..2.0)) * sa.transpose();
            let sb = rotation(rng.random_range(0.0..6.3)) * squeezer(rng.random_range(-1.0..1.0));
            let gb = &sb * thermal(rng.random_range(0.0..2.0)) * sb.transpose();
            let cm = GaussianCM::product(1, &ga, 1, &gb).unwrap();
            for dir in Direction::BOTH {
                assert!(!prop3(&cm, dir).violated);
            }
        }
    }

    #[test]
    fn unphysical_and_malformed_rejected() {
        let bad = RMat::identity(4, 4) * 0.2;
        assert!(matches!(GaussianCM::new(1, 1, bad), Err(Error::Unphysical(_))));
        let mut asym = RMat::identity(4, 4);
        asym[(0, 1)] = 0.3;
        assert!(matches!(GaussianCM::new(1, 1, asym), Err(Error::Unphysical(_))));
        assert!(matches!(
            GaussianCM::new(1, 2, RMat::identity(4, 4)),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let cm = GaussianCM::two_mode_squeezed_vacuum(0.3);
        assert_eq!(read_gaussian_cm(&write_gaussian_cm(&cm)).unwrap(), cm);
        let wrong = r#"{"modesA": 1, "modesB": 1, "gamma": [[0.5, 0.0], [0.0, 0.5]]}"#;
        assert!(matches!(read_gaussian_cm(wrong), Err(Error::Parse(_))));
        let asym = r#"{"modesA": 1, "modesB": 1, "gamma": [[1,0.2,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#;
        assert!(matches!(read_gaussian_cm(asym), Err(Error::Unphysical(_))));
    }

    #[test]
    fn steering_matrix_is_hermitian() {
        let cm = GaussianCM::two_mode_squeezed_vacuum(0.7);
        for dir in Direction::BOTH {
            let h = cm.steering_matrix(dir);
            assert!(linalg::hermitian_deviation(&h) < 1e-15);
            let eig = nalgebra::SymmetricEigen::new(h.clone());
            for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
                let v = eig.eigenvectors.column(k);
                // <v|H|v> is real and equals lambda
                let rayleigh = (v.adjoint() * &h * v)[(0, 0)];
                assert!(rayleigh.im.abs() < 1e-10);
                assert!((rayleigh.re - lambda).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn verdict_invariant_under_local_symplectic() {
        let mut rng = seeded_rng(77);
        let states = [
            GaussianCM::two_mode_squeezed_vacuum(0.4),
            GaussianCM::vacuum(1, 1),
            GaussianCM::product(1, &thermal(0.3), 1, &thermal(1.2)).unwrap(),
        ];
        for cm in &states {
            for _ in 0..10 {
                let sa = rotation(rng.random_range(0.0..6.3)) * squeezer(rng.random_range(-0.8..0.8));
                let sb = squeezer(rng.random_range(-0.8..0.8)) * rotation(rng.random_range(0.0..6.3));
                let moved = cm.transformed(&sa, &sb).unwrap();
                for dir in Direction::BOTH {
                    assert_eq!(prop3(&moved, dir).violated, prop3(cm, dir).violated);
                }
                // Passive rotations are orthogonal and symplectic: margin unchanged.
                let ra = rotation(rng.random_range(0.0..6.3));
                let rb = rotation(rng.random_range(0.0..6.3));
                let rotated = cm.transformed(&ra, &rb).unwrap();
                for dir in Direction::BOTH {
                    assert!((prop3(&rotated, dir).margin - prop3(cm, dir).margin).abs() < 1e-7);
                }
            }
        }
    }
}
