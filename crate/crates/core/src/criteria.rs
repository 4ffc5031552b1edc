//! Steering tests built on LOO covariance blocks.
//!
//! * [`prop1`]: trace norm of the correlation block against the purity bound.
//! * [`prop2`]: `Tr(C^T A^+ C)` against `1 - Tr(rho_B^2)`.
//! * [`lur_test`]: the local-uncertainty inequality with linear estimates,
//!   evaluated directly from moments of the joint state.
//! * [`extract_witness`]: observables and gain that realize a violation of
//!   the LUR inequality whenever [`prop1`] is violated.
//!
//! All verdicts carry a margin whose sign is oriented so that a positive
//! margin means "steerable in this direction".

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::covariance::CovarianceBlocks;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, RMat};
use crate::loo::{self, rotate_loos, ObservableSet};
use crate::state::{BipartiteState, Party};

/// A verdict is a violation when its margin exceeds this.
pub const DECISION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "A->B")]
    AToB,
    #[serde(rename = "B->A")]
    BToA,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::AToB, Direction::BToA];

    pub fn steered(self) -> Party {
        match self {
            Direction::AToB => Party::B,
            Direction::BToA => Party::A,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::AToB => "A->B",
            Direction::BToA => "B->A",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ab" | "a->b" | "a2b" => Ok(Direction::AToB),
            "ba" | "b->a" | "b2a" => Ok(Direction::BToA),
            _ => Err(Error::Config(format!("unknown direction '{s}' (expected ab or ba)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "prop1")]
    Prop1,
    #[serde(rename = "prop2")]
    Prop2,
    #[serde(rename = "lur-witness")]
    LurWitness,
    #[serde(rename = "gaussian")]
    Gaussian,
}

impl Criterion {
    pub fn id(self) -> &'static str {
        match self {
            Criterion::Prop1 => "prop1",
            Criterion::Prop2 => "prop2",
            Criterion::LurWitness => "lur-witness",
            Criterion::Gaussian => "gaussian",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "prop1" => Ok(Criterion::Prop1),
            "prop2" => Ok(Criterion::Prop2),
            "witness" | "lur-witness" | "lur" => Ok(Criterion::LurWitness),
            "gaussian" | "prop3" => Ok(Criterion::Gaussian),
            _ => Err(Error::Config(format!("unknown criterion '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteeringVerdict {
    pub criterion: Criterion,
    pub direction: Direction,
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
    pub margin: f64,
}

impl SteeringVerdict {
    /// Inequality `lhs <= rhs` holds for unsteerable states.
    pub fn upper_bounded(criterion: Criterion, direction: Direction, lhs: f64, rhs: f64) -> Self {
        Self::with_margin(criterion, direction, lhs, rhs, lhs - rhs)
    }

    /// Inequality `lhs >= rhs` holds for unsteerable states.
    pub fn lower_bounded(criterion: Criterion, direction: Direction, lhs: f64, rhs: f64) -> Self {
        Self::with_margin(criterion, direction, lhs, rhs, rhs - lhs)
    }

    fn with_margin(criterion: Criterion, direction: Direction, lhs: f64, rhs: f64, margin: f64) -> Self {
        Self {
            criterion,
            direction,
            lhs,
            rhs,
            violated: margin > DECISION_TOL,
            margin,
        }
    }
}

/// Marginal purities `Tr(rho_A^2)`, `Tr(rho_B^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Purities {
    pub a: f64,
    pub b: f64,
}

impl Purities {
    pub fn of(state: &BipartiteState) -> Self {
        Self {
            a: state.reduced(Party::A).purity(),
            b: state.reduced(Party::B).purity(),
        }
    }

    pub fn swapped(self) -> Self {
        Self { a: self.b, b: self.a }
    }
}

/// Trace-norm criterion. For `A->B` the bound is
/// `sqrt((d_A - Tr rho_A^2)(1 - Tr rho_B^2))`; `B->A` swaps the parties.
pub fn prop1(blocks: &CovarianceBlocks, purities: Purities, direction: Direction) -> SteeringVerdict {
    let (d_steering, p_steering, p_steered) = match direction {
        Direction::AToB => (blocks.dim_a, purities.a, purities.b),
        Direction::BToA => (blocks.dim_b, purities.b, purities.a),
    };
    let lhs = linalg::trace_norm(&blocks.c);
    let rhs = ((d_steering as f64 - p_steering).max(0.0) * (1.0 - p_steered).max(0.0)).sqrt();
    SteeringVerdict::upper_bounded(Criterion::Prop1, direction, lhs, rhs)
}

/// Pseudoinverse criterion `Tr(C^T A^+ C) <= 1 - Tr(rho_B^2)` (`A->B`), or
/// `Tr(C B^+ C^T) <= 1 - Tr(rho_A^2)` (`B->A`). `purity_of_steered` is the
/// purity of the party being steered.
pub fn prop2(blocks: &CovarianceBlocks, purity_of_steered: f64, direction: Direction) -> Result<SteeringVerdict> {
    let oriented = match direction {
        Direction::AToB => blocks.clone(),
        Direction::BToA => blocks.swapped(),
    };
    oriented.check_kernel_containment()?;
    let a_pinv = linalg::pseudoinverse(&oriented.a);
    let lhs = (oriented.c.transpose() * a_pinv * &oriented.c).trace();
    let rhs = 1.0 - purity_of_steered;
    Ok(SteeringVerdict::upper_bounded(Criterion::Prop2, direction, lhs, rhs))
}

/// Minimum total variance of a full LOO set in dimension `d`.
pub fn lur_bound_loos(d: usize) -> f64 {
    d.saturating_sub(1) as f64
}

fn variance(rho: &CMat, op: &CMat) -> Result<f64> {
    let mean = loo::expectation_raw(rho, op)?;
    let second = loo::expectation_raw(rho, &(op * op))?;
    Ok(second - mean * mean)
}

/// Evaluate `sum_k delta^2(g_k A_k x 1 + 1 x B_k)` against `d_B - 1`
/// (`A->B`). The steering party's list may be partial; the steered party's
/// list must be a full LOO set. Shorter lists are padded with zero operators.
/// For `B->A` the roles swap and the gains multiply `B_k`.
pub fn lur_test(
    state: &BipartiteState,
    set_a: &[CMat],
    set_b: &[CMat],
    gains: &[f64],
    direction: Direction,
) -> Result<SteeringVerdict> {
    let (state, steering, steered) = match direction {
        Direction::AToB => (state.clone(), set_a, set_b),
        Direction::BToA => (state.swapped(), set_b, set_a),
    };
    let (ds, dt) = (state.dim_a(), state.dim_b());
    loo::check_loo(dt, steered).map_err(|e| Error::PartialBobSet(e.to_string()))?;
    if let Some(o) = steering.iter().find(|o| o.shape() != (ds, ds)) {
        return Err(Error::DimensionMismatch {
            expected: ds,
            got: o.nrows(),
        });
    }
    let n = steering.len().max(steered.len());
    if gains.len() != n {
        return Err(Error::GainLength {
            expected: n,
            got: gains.len(),
        });
    }
    let (id_s, id_t) = (linalg::identity(ds), linalg::identity(dt));
    let zero_s = CMat::zeros(ds, ds);
    let zero_t = CMat::zeros(dt, dt);
    let rho = state.matrix();
    let mut lhs = 0.0;
    for (k, &g) in gains.iter().enumerate() {
        let a = steering.get(k).unwrap_or(&zero_s);
        let b = steered.get(k).unwrap_or(&zero_t);
        let op = linalg::kron(a, &id_t) * c(g, 0.0) + linalg::kron(&id_s, b);
        lhs += variance(rho, &op)?;
    }
    Ok(SteeringVerdict::lower_bounded(
        Criterion::LurWitness,
        direction,
        lhs,
        lur_bound_loos(dt),
    ))
}

/// Observables and uniform gain that turn a trace-norm violation into an
/// explicit LUR violation.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub direction: Direction,
    /// Rotated LOO set on party A.
    pub set_a: ObservableSet,
    /// Rotated LOO set on party B.
    pub set_b: ObservableSet,
    /// Gain applied to the steering party's observables.
    pub gain: f64,
    /// Orthogonal `R_A` with `A~_l = sum_k R_A[l, k] A_k` in the input basis.
    pub rotation_a: RMat,
    /// Orthogonal `R_B`, same convention.
    pub rotation_b: RMat,
    /// Singular values of the correlation block, descending.
    pub singular_values: Vec<f64>,
    pub lur_value: f64,
    pub bound: f64,
    pub violated: bool,
}

impl WitnessReport {
    pub fn verdict(&self) -> SteeringVerdict {
        SteeringVerdict::lower_bounded(Criterion::LurWitness, self.direction, self.lur_value, self.bound)
    }

    /// Gains vector for [`lur_test`] on the rotated sets.
    pub fn gains(&self) -> Vec<f64> {
        vec![self.gain; self.set_a.len().max(self.set_b.len())]
    }
}

/// SVD witness: with `C = U diag(s) V^T`, the rotated sets
/// `A~_k = sum_i U_ik A_i`, `B~_k = sum_i V_ik B_i` diagonalize the
/// correlations, and the gain `g = -||C||_tr / Tr(A)` minimizes the LUR sum
/// `g^2 Tr A + Tr B + 2 g ||C||_tr`.
pub fn extract_witness(
    blocks: &CovarianceBlocks,
    loo_a: &ObservableSet,
    loo_b: &ObservableSet,
    direction: Direction,
) -> Result<WitnessReport> {
    let (oriented, steering, steered) = match direction {
        Direction::AToB => (blocks.clone(), loo_a, loo_b),
        Direction::BToA => (blocks.swapped(), loo_b, loo_a),
    };
    if oriented.c.shape() != (steering.len(), steered.len()) {
        return Err(Error::DimensionMismatch {
            expected: oriented.c.nrows(),
            got: steering.len(),
        });
    }
    let (u, singular_values, v) = linalg::full_svd(&oriented.c);
    let (rot_steering, rot_steered) = (u.transpose(), v.transpose());
    let rotated_steering = rotate_loos(steering, &rot_steering)?;
    let rotated_steered = rotate_loos(steered, &rot_steered)?;
    let trace_norm: f64 = singular_values.iter().sum();
    let tr_a = oriented.trace_a();
    let gain = if tr_a > f64::EPSILON { -trace_norm / tr_a } else { 0.0 };
    let lur_value = gain * gain * tr_a + oriented.trace_b() + 2.0 * gain * trace_norm;
    let bound = lur_bound_loos(oriented.dim_b);
    let (set_a, set_b, rotation_a, rotation_b) = match direction {
        Direction::AToB => (rotated_steering, rotated_steered, rot_steering, rot_steered),
        Direction::BToA => (rotated_steered, rotated_steering, rot_steered, rot_steering),
    };
    Ok(WitnessReport {
        direction,
        set_a,
        set_b,
        rotation_a,
        rotation_b,
        gain,
        singular_values,
        lur_value,
        bound,
        violated: lur_value < bound - DECISION_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::{bipartite_blocks, canonical_blocks};
    use crate::loo::{gell_mann_loos, qubit_pauli_rotation};
    use crate::random::{random_bipartite, random_density, random_pure, random_separable, seeded_rng};
    use crate::state::Family;

    fn blocks_and_purities(s: &BipartiteState) -> (CovarianceBlocks, Purities) {
        (canonical_blocks(s).unwrap(), Purities::of(s))
    }

    #[test]
    fn prop1_singlet() {
        let (b, p) = blocks_and_purities(&Family::Werner2.state(1.0).unwrap());
        let v = prop1(&b, p, Direction::AToB);
        assert!((v.lhs - 1.5).abs() < 1e-12);
        assert!((v.rhs - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!(v.violated);
        assert!((v.margin - (v.lhs - v.rhs)).abs() < 1e-15);
    }

    #[test]
    fn product_states_never_violate() {
        let mut rng = seeded_rng(99);
        for (da, db) in [(2, 2), (2, 3), (3, 3)] {
            let s = BipartiteState::product(&random_density(da, &mut rng), &random_pure(db, &mut rng));
            let (b, p) = blocks_and_purities(&s);
            for dir in Direction::BOTH {
                let v1 = prop1(&b, p, dir);
                assert!(v1.lhs.abs() < 1e-10 && !v1.violated);
                let steered = if dir == Direction::AToB { p.b } else { p.a };
                let v2 = prop2(&b, steered, dir).unwrap();
                assert!(v2.lhs.abs() < 1e-10 && !v2.violated);
                let w = extract_witness(&b, &gell_mann_loos(da).unwrap(), &gell_mann_loos(db).unwrap(), dir).unwrap();
                assert!(w.gain.abs() < 1e-9 && !w.violated);
            }
        }
    }

    #[test]
    fn prop2_werner_closed_form() {
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            let (b, pur) = blocks_and_purities(&Family::Werner2.state(p).unwrap());
            for dir in Direction::BOTH {
                let v = prop2(&b, pur.b, dir).unwrap();
                assert!((v.lhs - 1.5 * p * p).abs() < 1e-12);
                assert!((v.rhs - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn prop2_reports_malformed_blocks() {
        let (mut b, p) = blocks_and_purities(&Family::Werner2.state(0.9).unwrap());
        // Identity direction of the canonical basis is (1, 1, 0, 0)/sqrt2 and is null in A.
        b.c[(0, 2)] += 0.2;
        b.c[(1, 2)] += 0.2;
        assert!(matches!(
            prop2(&b, p.b, Direction::AToB),
            Err(Error::MalformedBlocks { .. })
        ));
    }

    #[test]
    fn lur_bound_values() {
        assert_eq!(lur_bound_loos(2), 1.0);
        assert_eq!(lur_bound_loos(3), 2.0);
    }

    #[test]
    fn lur_test_zero_gains_is_steered_variance() {
        let s = random_bipartite(3, 2, &mut seeded_rng(4));
        let la = gell_mann_loos(3).unwrap();
        let lb = gell_mann_loos(2).unwrap();
        let v = lur_test(&s, la.observables(), lb.observables(), &[0.0; 9], Direction::AToB).unwrap();
        let expected = 2.0 - s.reduced(Party::B).purity();
        assert!((v.lhs - expected).abs() < 1e-10);
        assert!(v.lhs >= v.rhs && !v.violated);
    }

    #[test]
    fn lur_test_singlet_pauli_witness() {
        let s = Family::Werner2.state(1.0).unwrap();
        let pauli = rotate_loos(&gell_mann_loos(2).unwrap(), &qubit_pauli_rotation()).unwrap();
        // B~ = {1, -sx, -sy, -sz}/sqrt2 makes every correlation +1/2, so g = -1
        // gives 3/2 + 3/2 - 2 * 3/2 = 0.
        let flip = RMat::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0, -1.0, -1.0]));
        let flipped = rotate_loos(&pauli, &flip).unwrap();
        let v = lur_test(
            &s,
            pauli.observables(),
            flipped.observables(),
            &[-1.0; 4],
            Direction::AToB,
        )
        .unwrap();
        assert!(v.lhs.abs() < 1e-12);
        // Same observables on both sides need the opposite gain.
        let same = lur_test(&s, pauli.observables(), pauli.observables(), &[1.0; 4], Direction::AToB).unwrap();
        assert!(same.lhs.abs() < 1e-12);
        assert_eq!(v.rhs, 1.0);
        assert!(v.violated);
        assert!((v.margin - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lur_test_rejects_partial_steered_set_and_bad_gains() {
        let s = Family::Werner2.state(1.0).unwrap();
        let pauli = rotate_loos(&gell_mann_loos(2).unwrap(), &qubit_pauli_rotation()).unwrap();
        let partial = &pauli.observables()[1..];
        assert!(matches!(
            lur_test(&s, pauli.observables(), partial, &[1.0; 4], Direction::AToB),
            Err(Error::PartialBobSet(_))
        ));
        // Partial set on the steering side is fine.
        assert!(lur_test(&s, partial, pauli.observables(), &[1.0; 4], Direction::AToB).is_ok());
        assert!(matches!(
            lur_test(&s, pauli.observables(), pauli.observables(), &[1.0; 3], Direction::AToB),
            Err(Error::GainLength { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn witness_for_singlet() {
        let s = Family::Werner2.state(1.0).unwrap();
        let l = gell_mann_loos(2).unwrap();
        let b = bipartite_blocks(&s, &l, &l).unwrap();
        let w = extract_witness(&b, &l, &l, Direction::AToB).unwrap();
        assert!((w.gain + 1.0).abs() < 1e-12);
        assert!(w.lur_value.abs() < 1e-12);
        assert_eq!(w.bound, 1.0);
        assert!(w.violated);
    }

    #[test]
    fn witness_at_werner_half_not_violated() {
        let s = Family::Werner2.state(0.5).unwrap();
        let l = gell_mann_loos(2).unwrap();
        let b = bipartite_blocks(&s, &l, &l).unwrap();
        for dir in Direction::BOTH {
            let w = extract_witness(&b, &l, &l, dir).unwrap();
            assert!(!w.violated);
            let v = lur_test(&s, w.set_a.observables(), w.set_b.observables(), &w.gains(), dir).unwrap();
            assert!(!v.violated);
            assert!((v.lhs - w.lur_value).abs() < 1e-10);
        }
    }

    #[test]
    fn witness_matches_raw_moments_unequal_dims() {
        let mut rng = seeded_rng(17);
        for (da, db) in [(2, 3), (3, 2)] {
            let s = random_bipartite(da, db, &mut rng);
            let (la, lb) = (gell_mann_loos(da).unwrap(), gell_mann_loos(db).unwrap());
            let b = bipartite_blocks(&s, &la, &lb).unwrap();
            for dir in Direction::BOTH {
                let w = extract_witness(&b, &la, &lb, dir).unwrap();
                let v = lur_test(&s, w.set_a.observables(), w.set_b.observables(), &w.gains(), dir).unwrap();
                assert!((v.lhs - w.lur_value).abs() < 1e-8, "{da}x{db} {dir}");
                assert_eq!(v.violated, w.violated);
            }
        }
    }

    #[test]
    fn noisy_singlet_direction_asymmetry() {
        // Between the two prop1 thresholds only one direction is detected.
        let s = Family::NoisySinglet.state(0.56).unwrap();
        let (b, p) = blocks_and_purities(&s);
        let ab = prop1(&b, p, Direction::AToB);
        let ba = prop1(&b, p, Direction::BToA);
        assert_ne!(ab.violated, ba.violated);
    }

    #[test]
    fn werner_prop2_margin_monotone() {
        let margins: Vec<f64> = (0..=50)
            .map(|i| {
                let p = i as f64 / 50.0;
                let (b, pur) = blocks_and_purities(&Family::Werner2.state(p).unwrap());
                prop2(&b, pur.b, Direction::AToB).unwrap().margin
            })
            .collect();
        assert!(margins.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn separable_states_pass_everything() {
        let mut rng = seeded_rng(1234);
        for (da, db) in [(2, 2), (3, 3), (2, 3)] {
            let (la, lb) = (gell_mann_loos(da).unwrap(), gell_mann_loos(db).unwrap());
            for _ in 0..30 {
                let s = random_separable(da, db, &mut rng);
                let b = bipartite_blocks(&s, &la, &lb).unwrap();
                let p = Purities::of(&s);
                for dir in Direction::BOTH {
                    assert!(!prop1(&b, p, dir).violated);
                    let steered = if dir == Direction::AToB { p.b } else { p.a };
                    assert!(!prop2(&b, steered, dir).unwrap().violated);
                    assert!(!extract_witness(&b, &la, &lb, dir).unwrap().violated);
                }
            }
        }
    }

    #[test]
    fn ids_parse() {
        assert_eq!("witness".parse::<Criterion>().unwrap(), Criterion::LurWitness);
        assert_eq!("ba".parse::<Direction>().unwrap(), Direction::BToA);
        assert!("xy".parse::<Direction>().is_err());
        assert_eq!(serde_json::to_string(&Direction::AToB).unwrap(), "\"A->B\"");
    }
}
