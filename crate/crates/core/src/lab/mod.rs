//! Numerical checks of the structural theorems.
//!
//! Each check draws seeded instances, verifies the hypotheses numerically,
//! skips the trial when they fail, and otherwise asserts the conclusion as a
//! relative residual against the check's tolerance. Trials run in parallel;
//! trial `k` draws from `Rng::stream(seed, k)`, so reports are reproducible.

mod analytic;
mod basic;
mod block;
mod instances;
mod perturb;
pub mod spectral;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::admissible::AdmissibleError;
use crate::bracket::BracketError;
use crate::genlib::{GenError, Rng};
use crate::mat::{CMatrix, MatError};

pub use instances::HYPOTHESIS_TOL;

/// Tolerance for conclusions unless a check sets its own.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Trials per check by default.
pub const DEFAULT_TRIALS: usize = 50;
/// A bracket above this relative size counts as clearly nonzero in iff checks.
pub const NONMEMBER_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("unknown check '{0}'")]
    UnknownCheck(String),
    #[error("trial count must be positive")]
    NoTrials,
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Bracket(#[from] BracketError),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Admissible(#[from] AdmissibleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
}

/// The matrices of one trial, in the matrix JSON schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Instance {
    #[serde(rename = "A")]
    pub a: CMatrix,
    #[serde(rename = "T")]
    pub t: CMatrix,
    /// Further named matrices (blocks, perturbations), beside `A` and `T`.
    #[serde(flatten)]
    pub extra: BTreeMap<String, CMatrix>,
}

impl Instance {
    pub fn new(a: &CMatrix, t: &CMatrix) -> Self {
        Self { a: a.clone(), t: t.clone(), extra: BTreeMap::new() }
    }

    pub fn with(mut self, name: &str, m: &CMatrix) -> Self {
        self.extra.insert(name.into(), m.clone());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub case: String,
    pub skipped: bool,
    /// Largest asserted residual; absent for skipped trials.
    pub residual: Option<f64>,
    pub note: String,
}

/// A hypothesis-verified instance whose conclusion missed the tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailedInstance {
    pub trial: usize,
    pub case: String,
    pub residual: f64,
    pub instance: Instance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub trials: usize,
    /// Trials whose hypotheses were not met.
    pub skipped: usize,
    pub max_residual: f64,
    pub verdict: Verdict,
    pub seed: u64,
    pub tolerance: f64,
    /// Hypotheses quantified over all real `s` were checked at sample points only.
    pub sampled_hypothesis: bool,
    pub log: Vec<TrialRecord>,
    pub failures: Vec<FailedInstance>,
}

impl VerificationReport {
    pub fn checked(&self) -> usize {
        self.trials - self.skipped
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    /// `(file name, JSON)` for each failing instance.
    pub fn failure_dumps(&self) -> Vec<(String, String)> {
        self.failures
            .iter()
            .map(|f| {
                let name = format!("{}_trial{}.json", self.theorem, f.trial);
                (name, serde_json::to_string_pretty(&f.instance).expect("instance serializes"))
            })
            .collect()
    }
}

/// Outcome of one trial.
#[derive(Debug, Clone)]
pub(crate) struct Trial {
    case: &'static str,
    outcome: Outcome,
}

#[derive(Debug, Clone)]
enum Outcome {
    Skipped(String),
    Checked { residual: f64, instance: Instance, note: String },
}

impl Trial {
    pub(crate) fn skip(case: &'static str, reason: impl Into<String>) -> Self {
        Self { case, outcome: Outcome::Skipped(reason.into()) }
    }

    pub(crate) fn checked(case: &'static str, residual: f64, instance: Instance) -> Self {
        Self { case, outcome: Outcome::Checked { residual, instance, note: String::new() } }
    }

    pub(crate) fn note(mut self, text: impl Into<String>) -> Self {
        if let Outcome::Checked { note, .. } = &mut self.outcome {
            *note = text.into();
        }
        self
    }
}

/// One trial: its stream, its index (which selects the instance family) and the tolerance.
type TrialFn = fn(&mut Rng, usize, f64) -> Result<Trial, LabError>;

struct CheckSpec {
    name: &'static str,
    tolerance: f64,
    sampled_hypothesis: bool,
    run: TrialFn,
}

const CHECKS: [CheckSpec; 10] = [
    CheckSpec { name: "hierarchy", tolerance: DEFAULT_TOLERANCE, sampled_hypothesis: false, run: basic::hierarchy },
    CheckSpec { name: "translation", tolerance: DEFAULT_TOLERANCE, sampled_hypothesis: false, run: basic::translation },
    CheckSpec {
        name: "positivity_transfer",
        tolerance: DEFAULT_TOLERANCE,
        sampled_hypothesis: false,
        run: basic::positivity_transfer,
    },
    CheckSpec {
        name: "inverse_and_powers",
        tolerance: DEFAULT_TOLERANCE,
        sampled_hypothesis: false,
        run: basic::inverse_and_powers,
    },
    CheckSpec {
        name: "weighted_sums",
        tolerance: DEFAULT_TOLERANCE,
        sampled_hypothesis: false,
        run: basic::weighted_sums,
    },
    CheckSpec { name: "exponential", tolerance: 1e-8, sampled_hypothesis: false, run: analytic::exponential },
    CheckSpec {
        name: "order_reduction",
        tolerance: DEFAULT_TOLERANCE,
        sampled_hypothesis: true,
        run: analytic::order_reduction,
    },
    CheckSpec {
        name: "nilpotent_perturbation",
        tolerance: 1e-8,
        sampled_hypothesis: false,
        run: perturb::nilpotent_perturbation,
    },
    CheckSpec { name: "spectral", tolerance: 1e-6, sampled_hypothesis: false, run: spectral::spectral },
    CheckSpec {
        name: "block_triangular",
        tolerance: DEFAULT_TOLERANCE,
        sampled_hypothesis: false,
        run: block::block_triangular,
    },
];

/// Names accepted by [`run_check`], in suite order.
pub const CHECK_NAMES: [&str; 10] = [
    "hierarchy",
    "translation",
    "positivity_transfer",
    "inverse_and_powers",
    "weighted_sums",
    "exponential",
    "order_reduction",
    "nilpotent_perturbation",
    "spectral",
    "block_triangular",
];

fn spec(name: &str) -> Result<&'static CheckSpec, LabError> {
    CHECKS.iter().find(|c| c.name == name).ok_or_else(|| LabError::UnknownCheck(name.into()))
}

/// The tolerance a check uses when none is given.
pub fn default_tolerance(name: &str) -> Result<f64, LabError> {
    Ok(spec(name)?.tolerance)
}

/// Runs `trials` seeded trials of one check. `tol` overrides the check's default.
pub fn run_check(name: &str, trials: usize, seed: u64, tol: Option<f64>) -> Result<VerificationReport, LabError> {
    let spec = spec(name)?;
    if trials == 0 {
        return Err(LabError::NoTrials);
    }
    let tolerance = tol.unwrap_or(spec.tolerance);
    if !(tolerance > 0.0) {
        return Err(LabError::InvalidTolerance(tolerance));
    }
    let outcomes: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = Rng::stream(seed, k as u64);
            (spec.run)(&mut rng, k, tolerance).unwrap_or_else(|e| Trial::skip("error", e.to_string()))
        })
        .collect();
    Ok(assemble(spec, seed, tolerance, outcomes))
}

/// Runs every check with the same budget and seed.
pub fn run_all(trials: usize, seed: u64, tol: Option<f64>) -> Result<Vec<VerificationReport>, LabError> {
    CHECK_NAMES.iter().map(|name| run_check(name, trials, seed, tol)).collect()
}

fn assemble(spec: &CheckSpec, seed: u64, tolerance: f64, outcomes: Vec<Trial>) -> VerificationReport {
    let trials = outcomes.len();
    let mut log = Vec::with_capacity(trials);
    let mut failures = Vec::new();
    let mut skipped = 0;
    let mut max_residual: f64 = 0.0;
    for (k, trial) in outcomes.into_iter().enumerate() {
        match trial.outcome {
            Outcome::Skipped(reason) => {
                skipped += 1;
                log.push(TrialRecord { trial: k, case: trial.case.into(), skipped: true, residual: None, note: reason });
            }
            Outcome::Checked { residual, instance, note } => {
                let bad = !(residual <= tolerance);
                max_residual = if residual.is_nan() { f64::NAN } else { max_residual.max(residual) };
                if bad {
                    failures.push(FailedInstance { trial: k, case: trial.case.into(), residual, instance });
                }
                log.push(TrialRecord { trial: k, case: trial.case.into(), skipped: false, residual: Some(residual), note });
            }
        }
    }
    let verdict = if skipped == trials {
        Verdict::Vacuous
    } else if failures.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    VerificationReport {
        theorem: spec.name.into(),
        trials,
        skipped,
        max_residual,
        verdict,
        seed,
        tolerance,
        sampled_hypothesis: spec.sampled_hypothesis,
        log,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_matches_names() {
        for (spec, name) in CHECKS.iter().zip(CHECK_NAMES) {
            assert_eq!(spec.name, name);
        }
        assert!(matches!(run_check("nope", 1, 0, None), Err(LabError::UnknownCheck(_))));
        assert!(matches!(run_check("hierarchy", 0, 0, None), Err(LabError::NoTrials)));
    }

    #[test]
    fn verdict_rules() {
        let s = spec("hierarchy").unwrap();
        let inst = Instance::new(&CMatrix::identity(1), &CMatrix::identity(1));
        let all_skipped = assemble(s, 1, 1e-9, vec![Trial::skip("a", "x"), Trial::skip("a", "y")]);
        assert_eq!(all_skipped.verdict, Verdict::Vacuous);
        let mixed = assemble(s, 1, 1e-9, vec![Trial::skip("a", "x"), Trial::checked("a", 1e-12, inst.clone())]);
        assert_eq!(mixed.verdict, Verdict::Pass);
        assert_eq!(mixed.checked(), 1);
        let bad = assemble(s, 1, 1e-9, vec![Trial::checked("a", 1e-3, inst.clone()), Trial::checked("a", f64::NAN, inst)]);
        assert_eq!(bad.verdict, Verdict::Fail);
        assert_eq!(bad.failures.len(), 2);
        assert_eq!(bad.failure_dumps()[0].0, "hierarchy_trial0.json");
    }
}
