//! Density matrices, bipartite states and the built-in state families.
//!
//! Joint states use A-major tensor ordering: row/column index `a * dim_b + b`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, C64};

/// Absolute tolerance for the Hermitian, trace and positivity checks.
pub const STATE_TOL: f64 = 1e-9;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMat,
}

impl DensityMatrix {
    /// Validate `entries` as a density matrix. The input is symmetrized as
    /// `(M + M^dag) / 2` after the Hermiticity check passes.
    pub fn new(entries: CMat) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        if entries.nrows() == 0 {
            return Err(Error::DimensionTooSmall(0));
        }
        let deviation = linalg::hermitian_deviation(&entries);
        if deviation > STATE_TOL {
            return Err(Error::NonHermitian { deviation });
        }
        let entries = linalg::hermitian_part(&entries);
        let tr = linalg::trace_c(&entries).re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::NonUnitTrace {
                deviation: (tr - 1.0).abs(),
            });
        }
        let min_eigenvalue = linalg::min_hermitian_eigenvalue(&entries);
        if min_eigenvalue < -STATE_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { entries })
    }

    /// `|psi><psi|` for a (not necessarily normalized) vector.
    pub fn pure(psi: &DVector<C64>) -> Result<Self> {
        let n = psi.norm();
        if n == 0.0 {
            return Err(Error::NonUnitTrace { deviation: 1.0 });
        }
        let v = psi / c(n, 0.0);
        Self::new(&v * v.adjoint())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            entries: linalg::identity(dim) * c(1.0 / dim as f64, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.entries
    }

    pub fn purity(&self) -> f64 {
        purity(self)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.entries)
    }
}

/// Validating constructor; see [`DensityMatrix::new`].
pub fn make_density(entries: CMat) -> Result<DensityMatrix> {
    DensityMatrix::new(entries)
}

/// `Tr(rho^2)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    linalg::trace_product(rho.matrix(), rho.matrix()).re
}

/// Which party of a bipartite state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    joint: DensityMatrix,
}

impl BipartiteState {
    pub fn new(dim_a: usize, dim_b: usize, joint: DensityMatrix) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::DimensionTooSmall(dim_a.min(dim_b)));
        }
        if dim_a * dim_b != joint.dim() {
            return Err(Error::DimensionMismatch {
                expected: dim_a * dim_b,
                got: joint.dim(),
            });
        }
        Ok(Self { dim_a, dim_b, joint })
    }

    pub fn from_matrix(dim_a: usize, dim_b: usize, entries: CMat) -> Result<Self> {
        Self::new(dim_a, dim_b, DensityMatrix::new(entries)?)
    }

    pub fn product(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Self {
        let joint = DensityMatrix {
            entries: linalg::kron(rho_a.matrix(), rho_b.matrix()),
        };
        Self {
            dim_a: rho_a.dim(),
            dim_b: rho_b.dim(),
            joint,
        }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn joint(&self) -> &DensityMatrix {
        &self.joint
    }

    pub fn matrix(&self) -> &CMat {
        self.joint.matrix()
    }

    pub fn reduced(&self, keep: Party) -> DensityMatrix {
        partial_trace(self, keep)
    }

    /// The same state with the tensor factors exchanged (B becomes the first party).
    pub fn swapped(&self) -> Self {
        let (da, db) = (self.dim_a, self.dim_b);
        let m = self.matrix();
        let swapped = CMat::from_fn(da * db, da * db, |r, s| {
            let (b, a) = (r / da, r % da);
            let (b2, a2) = (s / da, s % da);
            m[(a * db + b, a2 * db + b2)]
        });
        Self {
            dim_a: db,
            dim_b: da,
            joint: DensityMatrix { entries: swapped },
        }
    }
}

/// Reduced density matrix of the kept party.
pub fn partial_trace(state: &BipartiteState, keep: Party) -> DensityMatrix {
    let (da, db) = (state.dim_a, state.dim_b);
    let m = state.matrix();
    let entries = match keep {
        Party::A => CMat::from_fn(da, da, |i, j| (0..db).map(|b| m[(i * db + b, j * db + b)]).sum()),
        Party::B => CMat::from_fn(db, db, |i, j| (0..da).map(|a| m[(a * db + i, a * db + j)]).sum()),
    };
    DensityMatrix {
        entries: linalg::hermitian_part(&entries),
    }
}

/// Built-in one-parameter state families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `p |psi-><psi-| + (1-p) (2/3 |00><00| + 1/3 |01><01|)`, two qubits.
    NoisySinglet,
    /// `F |Phi+><Phi+| + (1-F)/3 (|01><01| + |12><12| + |20><20|)`, two qutrits.
    IsotropicQutritF,
    /// `p |psi-><psi-| + (1-p)/4 I`, two qubits.
    Werner2,
    /// `F' |Phi+><Phi+| + (1-F')/2 (rho_1 + rho_2)`, two qutrits.
    TwoQutritFPrime,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::NoisySinglet,
        Family::IsotropicQutritF,
        Family::Werner2,
        Family::TwoQutritFPrime,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::NoisySinglet => "noisy-singlet",
            Family::IsotropicQutritF => "isotropic-qutrit-F",
            Family::Werner2 => "werner-2",
            Family::TwoQutritFPrime => "two-qutrit-Fprime",
        }
    }

    pub fn local_dim(self) -> usize {
        match self {
            Family::NoisySinglet | Family::Werner2 => 2,
            Family::IsotropicQutritF | Family::TwoQutritFPrime => 3,
        }
    }

    pub fn state(self, parameter: f64) -> Result<BipartiteState> {
        family_state(&FamilySpec::Parametric {
            family: self,
            parameter,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown family '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Parametric { family: Family, parameter: f64 },
    Explicit(BipartiteState),
}

fn basis_ket(d: usize, a: usize, b: usize) -> DVector<C64> {
    let mut v = DVector::from_element(d * d, c(0.0, 0.0));
    v[a * d + b] = c(1.0, 0.0);
    v
}

fn projector(v: &DVector<C64>) -> CMat {
    v * v.adjoint()
}

fn singlet() -> DVector<C64> {
    (basis_ket(2, 0, 1) - basis_ket(2, 1, 0)) / c(2f64.sqrt(), 0.0)
}

fn phi_plus_qutrit() -> DVector<C64> {
    (basis_ket(3, 0, 0) + basis_ket(3, 1, 1) + basis_ket(3, 2, 2)) / c(3f64.sqrt(), 0.0)
}

fn diagonal_mixture(d: usize, terms: &[(usize, usize, f64)]) -> CMat {
    let mut m = CMat::zeros(d * d, d * d);
    for &(a, b, w) in terms {
        m[(a * d + b, a * d + b)] += c(w, 0.0);
    }
    m
}

/// Build the state named by `spec`.
pub fn family_state(spec: &FamilySpec) -> Result<BipartiteState> {
    let (family, p) = match spec {
        FamilySpec::Explicit(state) => return Ok(state.clone()),
        FamilySpec::Parametric { family, parameter } => (*family, *parameter),
    };
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::ParameterOutOfRange {
            family: family.id().to_string(),
            value: p,
        });
    }
    let w = |x: f64| c(x, 0.0);
    let m = match family {
        Family::NoisySinglet => {
            let noise = diagonal_mixture(2, &[(0, 0, 2.0 / 3.0), (0, 1, 1.0 / 3.0)]);
            projector(&singlet()) * w(p) + noise * w(1.0 - p)
        }
        Family::Werner2 => projector(&singlet()) * w(p) + linalg::identity(4) * w((1.0 - p) / 4.0),
        Family::IsotropicQutritF => {
            let third = 1.0 / 3.0;
            let noise = diagonal_mixture(3, &[(0, 1, third), (1, 2, third), (2, 0, third)]);
            projector(&phi_plus_qutrit()) * w(p) + noise * w(1.0 - p)
        }
        Family::TwoQutritFPrime => {
            let third = 1.0 / 3.0;
            let rho1 = diagonal_mixture(3, &[(0, 1, third), (1, 2, third), (2, 0, third)]);
            let rho2 = diagonal_mixture(3, &[(0, 2, third), (1, 0, third), (2, 1, third)]);
            projector(&phi_plus_qutrit()) * w(p) + (rho1 + rho2) * w((1.0 - p) / 2.0)
        }
    };
    let d = family.local_dim();
    BipartiteState::from_matrix(d, d, m)
}

/// On-disk form of an explicit bipartite state (row-major, A-major ordering).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExplicitStateDoc {
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
}

impl ExplicitStateDoc {
    pub fn from_state(state: &BipartiteState) -> Self {
        let m = state.matrix();
        let n = m.nrows();
        let rows = |f: fn(&C64) -> f64| (0..n).map(|i| (0..n).map(|j| f(&m[(i, j)])).collect()).collect();
        Self {
            dim_a: state.dim_a,
            dim_b: state.dim_b,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_state(&self) -> Result<BipartiteState> {
        let n = self.dim_a * self.dim_b;
        check_square(&self.re, n, "re")?;
        if !self.im.is_empty() {
            check_square(&self.im, n, "im")?;
        }
        let m = CMat::from_fn(n, n, |i, j| {
            let im = if self.im.is_empty() { 0.0 } else { self.im[i][j] };
            c(self.re[i][j], im)
        });
        BipartiteState::from_matrix(self.dim_a, self.dim_b, m)
    }
}

fn check_square(rows: &[Vec<f64>], n: usize, name: &str) -> Result<()> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("'{name}' must be a {n}x{n} array")));
    }
    Ok(())
}

pub fn read_explicit_state(json: &str) -> Result<BipartiteState> {
    let doc: ExplicitStateDoc = serde_json::from_str(json)?;
    doc.to_state()
}

pub fn write_explicit_state(state: &BipartiteState) -> String {
    serde_json::to_string_pretty(&ExplicitStateDoc::from_state(state)).expect("plain data serializes")
}
