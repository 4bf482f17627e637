//! Run outputs: per-iteration ledger, volumes, diagnostics, best sample.

use crate::diagnostics::ConfidenceDiagnostics;
use crate::partition::{LeafRecord, RegionLabel};
use crate::scalar::Scalar;

/// How the run ended.
#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Completed,
    /// The objective failed; the report covers everything up to the failure.
    AbortedEvaluation { point: Vec<f64>, message: String },
}

impl RunStatus {
    pub fn is_completed(&self) -> bool {
        matches!(self, RunStatus::Completed)
    }
}

/// Counts and volumes per label at the end of an iteration.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LabelTally<F> {
    pub count: usize,
    pub volume: F,
}

/// One row of the budget ledger.
#[derive(Debug, Clone)]
pub struct IterationRecord<F> {
    pub iteration: usize,
    /// Objective calls made during this iteration.
    pub evaluations: usize,
    /// Total calls made up to and including this iteration.
    pub cumulative_evaluations: usize,
    /// Tallies indexed like [`RegionLabel::ALL`].
    pub tallies: [LabelTally<F>; 6],
}

impl<F: Scalar> IterationRecord<F> {
    pub fn tally(&self, label: RegionLabel) -> LabelTally<F> {
        let idx = RegionLabel::ALL
            .iter()
            .position(|l| *l == label)
            .expect("label is in ALL");
        self.tallies[idx]
    }
}

/// Falsification-volume estimates, absolute and normalized by the domain.
#[derive(Debug, Clone)]
pub struct FalsificationVolume<F> {
    /// Total volume of leaves not classified satisfying
    /// (violating, remaining, reclassified-from-violating, unbranchable).
    pub hyperbox: F,
    pub hyperbox_normalized: F,
    /// Per-level `(q, volume)` pairs: mass where the pointwise lower
    /// q-quantile of the surrogate sits below zero.
    pub quantile: Vec<(F, F)>,
    pub quantile_normalized: Vec<(F, F)>,
}

/// Best (lowest) objective value found and where.
#[derive(Debug, Clone, PartialEq)]
pub struct BestSample<F> {
    pub point: Vec<F>,
    pub value: F,
}

/// Everything a single replication produces.
#[derive(Debug, Clone)]
pub struct RunReport<F> {
    pub status: RunStatus,
    pub iterations: Vec<IterationRecord<F>>,
    pub leaves: Vec<LeafRecord<F>>,
    pub falsification: FalsificationVolume<F>,
    pub diagnostics: ConfidenceDiagnostics<F>,
    pub best: Option<BestSample<F>>,
    /// Objective calls actually made.
    pub evaluations: usize,
    pub domain_volume: F,
    pub seed: u64,
}

impl<F: Scalar> RunReport<F> {
    /// Whether any evaluated sample fell below zero.
    pub fn falsified(&self) -> bool {
        self.best.as_ref().map(|b| b.value < F::zero()).unwrap_or(false)
    }

    /// Quantile volume at a given level, if it was computed.
    pub fn quantile_volume(&self, level: F) -> Option<F> {
        self.falsification
            .quantile
            .iter()
            .find(|(q, _)| *q == level)
            .map(|(_, v)| *v)
    }
}
