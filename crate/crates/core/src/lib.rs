//! Steering detection from covariance matrices of local observables.
//!
//! The crate certifies EPR steering of bipartite states in any finite
//! dimension using local orthogonal observables (LOOs), and of Gaussian
//! continuous-variable states through a symplectic matrix inequality.
//!
//! Modules, bottom-up:
//!
//! - [`state`]: validated density matrices, bipartite states, partial traces,
//!   and the built-in one-parameter families.
//! - [`loo`]: generalized Gell-Mann LOO sets, orthogonal rotations of them,
//!   expectation values.
//! - [`covariance`]: symmetrized covariance matrices and the `[[A, C], [C^T, B]]`
//!   block form.
//! - [`criteria`]: the trace-norm and pseudoinverse criteria, the direct LUR
//!   test and SVD witness extraction.
//! - [`gaussian`]: the `M x N` mode Gaussian criterion.
//! - [`analysis`]: reports and threshold scans used by the `covsteer` binary.
//!
//! ```
//! use covsteer::{canonical_blocks, prop2, Direction, Family, Purities};
//!
//! let state = Family::Werner2.state(0.8).unwrap();
//! let blocks = canonical_blocks(&state).unwrap();
//! let verdict = prop2(&blocks, Purities::of(&state).b, Direction::AToB).unwrap();
//! assert!(verdict.violated);
//! ```

pub mod analysis;
pub mod covariance;
pub mod criteria;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod loo;
pub mod random;
pub mod state;

pub use analysis::{run_analysis, threshold_scan, AnalysisConfig, InputSource, Report, ScanCriterion, ScanRequest};
pub use covariance::{bipartite_blocks, canonical_blocks, covariance_matrix, CovarianceBlocks};
pub use criteria::{
    extract_witness, lur_bound_loos, lur_test, prop1, prop2, Criterion, Direction, Purities, SteeringVerdict,
    WitnessReport,
};
pub use error::{Error, Result};
pub use gaussian::{prop3, read_gaussian_cm, symplectic_form, GaussianCM};
pub use loo::{expectation, gell_mann_loos, rotate_loos, ObservableSet};
pub use state::{
    family_state, make_density, partial_trace, purity, read_explicit_state, BipartiteState, DensityMatrix, Family,
    FamilySpec, Party,
};
