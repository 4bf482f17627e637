//! Run configuration and validation.

use crate::error::{PartXError, Result};
use crate::scalar::Scalar;

/// All tunables of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct PartXConfig<F> {
    /// Minimum number of points a region needs before its model is fit.
    pub init_samples: usize,
    /// Sequential expected-improvement evaluations per unclassified region
    /// and iteration.
    pub bo_samples: usize,
    /// Shared per-iteration budget spread over classified regions.
    pub classified_budget: usize,
    /// Total number of objective evaluations.
    pub total_budget: usize,
    /// Monte-Carlo replicates of the quantile estimation step.
    pub mc_replicates: usize,
    /// Draws per Monte-Carlo replicate.
    pub mc_draws: usize,
    /// Children per branching cut.
    pub branching: usize,
    /// Classification significance level.
    pub classification_level: F,
    /// Minimum per-dimension side length as a fraction of the domain side.
    pub min_side_fraction: F,
    /// Base significance of the per-level error schedule.
    pub significance: F,
    /// Tolerated misclassified volume (reported, never steers the search).
    pub volume_tolerance: F,
    pub seed: u64,
    /// Independent end-to-end repetitions (consumed by runners; a single
    /// call runs one replication under `seed`).
    pub macro_reps: usize,
}

impl<F: Scalar> Default for PartXConfig<F> {
    /// Benchmark defaults: n0=10, 10 EI draws, 100 shared classified draws,
    /// 5000 total evaluations, a 10x100 Monte-Carlo grid, binary cuts,
    /// 0.05 classification level, 0.001 volume floor.
    fn default() -> Self {
        Self {
            init_samples: 10,
            bo_samples: 10,
            classified_budget: 100,
            total_budget: 5000,
            mc_replicates: 10,
            mc_draws: 100,
            branching: 2,
            classification_level: F::of(0.05),
            min_side_fraction: F::of(0.001),
            significance: F::of(0.05),
            volume_tolerance: F::zero(),
            seed: 0,
            macro_reps: 10,
        }
    }
}

impl<F: Scalar> PartXConfig<F> {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(PartXError::ConfigInvalid(msg.into()));
        if self.init_samples < 2 {
            return fail("init_samples must be at least 2");
        }
        if self.total_budget < self.init_samples {
            return fail("total_budget must cover init_samples");
        }
        if self.branching < 2 {
            return fail("branching must be at least 2");
        }
        if self.mc_replicates < 2 {
            return fail("mc_replicates must be at least 2");
        }
        if self.mc_draws < 1 {
            return fail("mc_draws must be at least 1");
        }
        let unit = |v: F| v > F::zero() && v < F::one();
        if !unit(self.classification_level) {
            return fail("classification_level must lie in (0, 1)");
        }
        if !unit(self.min_side_fraction) {
            return fail("min_side_fraction must lie in (0, 1)");
        }
        if !unit(self.significance) {
            return fail("significance must lie in (0, 1)");
        }
        if !(self.volume_tolerance >= F::zero()) {
            return fail("volume_tolerance must be nonnegative");
        }
        if self.macro_reps == 0 {
            return fail("macro_reps must be positive");
        }
        Ok(())
    }
}
