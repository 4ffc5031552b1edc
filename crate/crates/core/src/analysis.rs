//! Analysis driver behind the command-line tool: evaluates the requested
//! criteria on one input, runs threshold scans over the built-in families,
//! and assembles a deterministic report.

use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::covariance::bipartite_blocks;
use crate::criteria::{self, Criterion, Direction, Purities, SteeringVerdict, WitnessReport, DECISION_TOL};
use crate::error::{Error, Result};
use crate::gaussian::{self, GaussianCM};
use crate::linalg::RMat;
use crate::loo::gell_mann_loos;
use crate::state::{BipartiteState, Family};

pub const DEFAULT_SCAN_TOL: f64 = 1e-6;
/// Step of the fallback grid used when the scan bracket does not straddle the threshold.
pub const GRID_STEP: f64 = 1e-3;
/// Significant digits kept in machine-readable reports.
pub const REPORT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    Family {
        family: Family,
        parameter: f64,
    },
    /// An explicit state, with a label (usually the file path) for the report.
    Explicit {
        label: String,
        state: BipartiteState,
    },
    Gaussian {
        label: String,
        cm: GaussianCM,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanCriterion {
    Prop1,
    Prop2,
    Witness,
    /// Smallest of the prop1 and prop2 thresholds.
    Best,
}

impl ScanCriterion {
    pub fn id(self) -> &'static str {
        match self {
            ScanCriterion::Prop1 => "prop1",
            ScanCriterion::Prop2 => "prop2",
            ScanCriterion::Witness => "lur-witness",
            ScanCriterion::Best => "best",
        }
    }
}

impl FromStr for ScanCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "prop1" => Ok(ScanCriterion::Prop1),
            "prop2" => Ok(ScanCriterion::Prop2),
            "witness" | "lur-witness" => Ok(ScanCriterion::Witness),
            "best" | "min" => Ok(ScanCriterion::Best),
            _ => Err(Error::Config(format!(
                "unknown scan criterion '{s}' (prop1, prop2, witness, best)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRequest {
    pub family: Family,
    pub criterion: ScanCriterion,
    pub direction: Direction,
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
}

impl ScanRequest {
    pub fn new(family: Family, criterion: ScanCriterion, direction: Direction) -> Self {
        Self {
            family,
            criterion,
            direction,
            lo: 0.0,
            hi: 1.0,
            tol: DEFAULT_SCAN_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub input: Option<InputSource>,
    /// Empty means "all criteria that apply to the input".
    pub criteria: Vec<Criterion>,
    /// Empty means both directions.
    pub directions: Vec<Direction>,
    pub scan: Option<ScanRequest>,
}

impl AnalysisConfig {
    pub fn for_input(input: InputSource) -> Self {
        Self {
            input: Some(input),
            criteria: Vec::new(),
            directions: Vec::new(),
            scan: None,
        }
    }

    pub fn for_scan(scan: ScanRequest) -> Self {
        Self {
            input: None,
            criteria: Vec::new(),
            directions: Vec::new(),
            scan: Some(scan),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputEcho {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(rename = "dimA", skip_serializing_if = "Option::is_none")]
    pub dim_a: Option<usize>,
    #[serde(rename = "dimB", skip_serializing_if = "Option::is_none")]
    pub dim_b: Option<usize>,
    #[serde(rename = "modesA", skip_serializing_if = "Option::is_none")]
    pub modes_a: Option<usize>,
    #[serde(rename = "modesB", skip_serializing_if = "Option::is_none")]
    pub modes_b: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessSummary {
    pub direction: Direction,
    pub gain: f64,
    #[serde(rename = "lurValue")]
    pub lur_value: f64,
    pub bound: f64,
    pub violated: bool,
    #[serde(rename = "singularValues")]
    pub singular_values: Vec<f64>,
    /// Rows give each rotated observable in the canonical Gell-Mann basis of A.
    #[serde(rename = "rotationA")]
    pub rotation_a: Vec<Vec<f64>>,
    #[serde(rename = "rotationB")]
    pub rotation_b: Vec<Vec<f64>>,
}

fn rows(m: &RMat) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

impl From<&WitnessReport> for WitnessSummary {
    fn from(w: &WitnessReport) -> Self {
        Self {
            direction: w.direction,
            gain: w.gain,
            lur_value: w.lur_value,
            bound: w.bound,
            violated: w.violated,
            singular_values: w.singular_values.clone(),
            rotation_a: rows(&w.rotation_a),
            rotation_b: rows(&w.rotation_b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub family: String,
    pub criterion: &'static str,
    pub direction: Direction,
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputEcho>,
    pub verdicts: Vec<SteeringVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<WitnessSummary>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<ThresholdResult>,
}

impl Report {
    /// JSON with every number rounded to 12 significant digits.
    pub fn to_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        round_numbers(&mut value);
        let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
        out.push('\n');
        out
    }

    pub fn verdict(&self, criterion: Criterion, direction: Direction) -> Option<&SteeringVerdict> {
        self.verdicts
            .iter()
            .find(|v| v.criterion == criterion && v.direction == direction)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.tool, self.version);
        if let Some(input) = &self.input {
            match (&input.family, input.parameter, &input.source) {
                (Some(f), Some(p), _) => s += &format!("input: family {f} at {p}\n"),
                (_, _, Some(src)) => s += &format!("input: {} {src}\n", input.kind),
                _ => s += &format!("input: {}\n", input.kind),
            }
        }
        if !self.verdicts.is_empty() {
            s += &format!(
                "{:<12} {:<5} {:>16} {:>16} {:>16}  verdict\n",
                "criterion", "dir", "lhs", "rhs", "margin"
            );
        }
        for v in &self.verdicts {
            let verdict = if v.violated { "STEERABLE" } else { "not detected" };
            s += &format!(
                "{:<12} {:<5} {:>16.10} {:>16.10} {:>16.10}  {verdict}\n",
                v.criterion.id(),
                v.direction.to_string(),
                unsigned_zero(v.lhs),
                unsigned_zero(v.rhs),
                unsigned_zero(v.margin)
            );
        }
        for w in self.witness.iter().flatten() {
            s += &format!(
                "witness {}: gain {:.10}, LUR sum {:.10} vs bound {} ({})\n",
                w.direction,
                unsigned_zero(w.gain),
                unsigned_zero(w.lur_value),
                w.bound,
                if w.violated { "violated" } else { "satisfied" }
            );
        }
        if let Some(t) = &self.threshold {
            s += &format!(
                "threshold: {} {} {} in [{}, {}] -> {:.8} (tol {:e})\n",
                t.family, t.criterion, t.direction, t.lo, t.hi, t.threshold, t.tol
            );
        }
        s
    }
}

/// Round `x` to `REPORT_DIGITS` significant digits.
/// Values that print as zero at 10 decimals lose their sign.
fn unsigned_zero(x: f64) -> f64 {
    if x.abs() < 5e-11 {
        0.0
    } else {
        x
    }
}

pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", REPORT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().unwrap_or_default());
            if let Some(num) = serde_json::Number::from_f64(x) {
                *n = num;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

fn echo(input: &InputSource) -> InputEcho {
    let blank = InputEcho {
        kind: "",
        family: None,
        parameter: None,
        source: None,
        dim_a: None,
        dim_b: None,
        modes_a: None,
        modes_b: None,
    };
    match input {
        InputSource::Family { family, parameter } => InputEcho {
            kind: "family",
            family: Some(family.id().to_string()),
            parameter: Some(*parameter),
            dim_a: Some(family.local_dim()),
            dim_b: Some(family.local_dim()),
            ..blank
        },
        InputSource::Explicit { label, state } => InputEcho {
            kind: "state",
            source: Some(label.clone()),
            dim_a: Some(state.dim_a()),
            dim_b: Some(state.dim_b()),
            ..blank
        },
        InputSource::Gaussian { label, cm } => InputEcho {
            kind: "gaussian",
            source: Some(label.clone()),
            modes_a: Some(cm.modes_a()),
            modes_b: Some(cm.modes_b()),
            ..blank
        },
    }
}

fn dedup<T: PartialEq + Copy>(items: &[T]) -> Vec<T> {
    let mut out = Vec::new();
    for &x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn discrete_verdicts(
    state: &BipartiteState,
    criteria: &[Criterion],
    directions: &[Direction],
) -> Result<(Vec<SteeringVerdict>, Vec<WitnessSummary>)> {
    let loo_a = gell_mann_loos(state.dim_a())?;
    let loo_b = gell_mann_loos(state.dim_b())?;
    let blocks = bipartite_blocks(state, &loo_a, &loo_b)?;
    let purities = Purities::of(state);
    let mut verdicts = Vec::new();
    let mut witnesses = Vec::new();
    for &criterion in criteria {
        for &direction in directions {
            let verdict = match criterion {
                Criterion::Prop1 => criteria::prop1(&blocks, purities, direction),
                Criterion::Prop2 => {
                    let steered = match direction {
                        Direction::AToB => purities.b,
                        Direction::BToA => purities.a,
                    };
                    criteria::prop2(&blocks, steered, direction)?
                }
                Criterion::LurWitness => {
                    let w = criteria::extract_witness(&blocks, &loo_a, &loo_b, direction)?;
                    witnesses.push(WitnessSummary::from(&w));
                    w.verdict()
                }
                Criterion::Gaussian => {
                    return Err(Error::Config("the gaussian criterion needs a --gaussian input".into()))
                }
            };
            verdicts.push(verdict);
        }
    }
    Ok((verdicts, witnesses))
}

/// Evaluate every requested (criterion, direction) pair once, in request order.
pub fn run_analysis(config: &AnalysisConfig) -> Result<Report> {
    if config.input.is_none() && config.scan.is_none() {
        return Err(Error::Config("nothing to do: give an input or a scan request".into()));
    }
    let directions = if config.directions.is_empty() {
        Direction::BOTH.to_vec()
    } else {
        dedup(&config.directions)
    };
    let mut report = Report {
        tool: "covsteer",
        version: env!("CARGO_PKG_VERSION"),
        input: None,
        verdicts: Vec::new(),
        witness: None,
        threshold: None,
    };
    if let Some(input) = &config.input {
        report.input = Some(echo(input));
        match input {
            InputSource::Gaussian { cm, .. } => {
                let criteria = if config.criteria.is_empty() {
                    vec![Criterion::Gaussian]
                } else {
                    dedup(&config.criteria)
                };
                if let Some(c) = criteria.iter().find(|&&c| c != Criterion::Gaussian) {
                    return Err(Error::Config(format!(
                        "criterion {c} does not apply to a Gaussian covariance matrix"
                    )));
                }
                report.verdicts = directions.iter().map(|&d| gaussian::prop3(cm, d)).collect();
            }
            InputSource::Family { family, parameter } => {
                let state = family.state(*parameter)?;
                let criteria = discrete_criteria(&config.criteria);
                let (verdicts, witnesses) = discrete_verdicts(&state, &criteria, &directions)?;
                report.verdicts = verdicts;
                report.witness = (!witnesses.is_empty()).then_some(witnesses);
            }
            InputSource::Explicit { state, .. } => {
                let criteria = discrete_criteria(&config.criteria);
                let (verdicts, witnesses) = discrete_verdicts(state, &criteria, &directions)?;
                report.verdicts = verdicts;
                report.witness = (!witnesses.is_empty()).then_some(witnesses);
            }
        }
    }
    if let Some(scan) = &config.scan {
        let threshold = threshold_scan(scan.family, scan.criterion, scan.direction, scan.lo, scan.hi, scan.tol)?;
        report.threshold = Some(ThresholdResult {
            family: scan.family.id().to_string(),
            criterion: scan.criterion.id(),
            direction: scan.direction,
            lo: scan.lo,
            hi: scan.hi,
            tol: scan.tol,
            threshold,
        });
    }
    Ok(report)
}

fn discrete_criteria(requested: &[Criterion]) -> Vec<Criterion> {
    if requested.is_empty() {
        vec![Criterion::Prop1, Criterion::Prop2, Criterion::LurWitness]
    } else {
        dedup(requested)
    }
}

/// Signed margin (positive = steerable) of `criterion` on `family` at `parameter`.
pub fn family_margin(family: Family, criterion: ScanCriterion, direction: Direction, parameter: f64) -> Result<f64> {
    let state = family.state(parameter)?;
    let loo = gell_mann_loos(family.local_dim())?;
    let blocks = bipartite_blocks(&state, &loo, &loo)?;
    let purities = Purities::of(&state);
    let steered = match direction {
        Direction::AToB => purities.b,
        Direction::BToA => purities.a,
    };
    Ok(match criterion {
        ScanCriterion::Prop1 => criteria::prop1(&blocks, purities, direction).margin,
        ScanCriterion::Prop2 => criteria::prop2(&blocks, steered, direction)?.margin,
        ScanCriterion::Witness => {
            criteria::extract_witness(&blocks, &loo, &loo, direction)?
                .verdict()
                .margin
        }
        ScanCriterion::Best => criteria::prop1(&blocks, purities, direction)
            .margin
            .max(criteria::prop2(&blocks, steered, direction)?.margin),
    })
}

/// Smallest parameter in `[lo, hi]` at which the criterion detects steering,
/// located to within `tol`.
///
/// Bisects on the sign of the margin when `lo` is undetected and `hi` is
/// detected; otherwise walks a 1e-3 grid from `lo` to find the first detected
/// point and bisects the last step.
pub fn threshold_scan(
    family: Family,
    criterion: ScanCriterion,
    direction: Direction,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    if criterion == ScanCriterion::Best {
        let p1 = threshold_scan(family, ScanCriterion::Prop1, direction, lo, hi, tol);
        let p2 = threshold_scan(family, ScanCriterion::Prop2, direction, lo, hi, tol);
        return match (p1, p2) {
            (Ok(a), Ok(b)) => Ok(a.min(b)),
            (Ok(a), Err(_)) | (Err(_), Ok(a)) => Ok(a),
            (Err(e), Err(_)) => Err(e),
        };
    }
    let valid = lo <= hi && tol > 0.0;
    if !valid {
        return Err(Error::Config(format!("invalid scan range [{lo}, {hi}] with tol {tol}")));
    }
    let detected = |p: f64| family_margin(family, criterion, direction, p).map(|m| m > DECISION_TOL);
    let (mut below, mut above) = if !detected(lo)? && detected(hi)? {
        (lo, hi)
    } else {
        let steps = ((hi - lo) / GRID_STEP).ceil() as usize;
        let mut bracket = None;
        let mut prev = lo;
        for i in 0..=steps {
            let p = (lo + i as f64 * GRID_STEP).min(hi);
            if detected(p)? {
                if i == 0 {
                    return Ok(lo);
                }
                bracket = Some((prev, p));
                break;
            }
            prev = p;
        }
        bracket.ok_or(Error::NoViolationInRange { lo, hi })?
    };
    while above - below > tol {
        let mid = 0.5 * (below + above);
        if detected(mid)? {
            above = mid;
        } else {
            below = mid;
        }
    }
    Ok(above)
}
