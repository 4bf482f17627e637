//! Reported misclassification-probability diagnostics.
//!
//! These quantities are computed from the classification history and carried
//! in the run report; they never influence the search itself.

use crate::config::PartXConfig;
use crate::error::{PartXError, Result};
use crate::scalar::Scalar;

/// What happened to a region when it was (re)classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    NewPositive,
    NewNegative,
    ReclassifiedPositive,
    ReclassifiedNegative,
}

impl EventKind {
    pub fn counts_positive(self) -> bool {
        matches!(self, EventKind::NewPositive | EventKind::ReclassifiedPositive)
    }
}

/// One classification decision, with the inputs of its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassificationEvent<F> {
    pub kind: EventKind,
    /// Tree level of the region.
    pub level: usize,
    /// Iteration at which the decision was made.
    pub iteration: usize,
    /// Evaluations accumulated in the region.
    pub samples: usize,
    /// Estimated probability mass of the hypothesis within the region.
    pub probability: F,
}

/// Per-level significance schedule: `alpha` at level 1, divided by the
/// branching factor at each deeper level.
pub fn significance_schedule<F: Scalar>(alpha: F, branching: usize, levels: usize) -> Vec<F> {
    let b = F::of_usize(branching);
    let mut out = Vec::with_capacity(levels);
    let mut current = alpha;
    for _ in 0..levels {
        out.push(current);
        current = current / b;
    }
    out
}

/// Per-region error-rate bound
/// `(ln 1/p + ln 1/alpha + 2 ln n + 1) / n`, clamped to [0, 1].
pub fn pac_delta<F: Scalar>(probability: F, alpha: F, samples: usize) -> Result<F> {
    let p = probability.as_f64();
    if !(p > 0.0 && p <= 1.0) {
        return Err(PartXError::InvalidProbability(p));
    }
    let a = alpha.as_f64();
    if !(a > 0.0 && a <= 1.0) {
        return Err(PartXError::InvalidProbability(a));
    }
    if samples == 0 {
        return Ok(F::one());
    }
    let n = samples as f64;
    let raw = ((1.0 / p).ln() + (1.0 / a).ln() + 2.0 * n.ln() + 1.0) / n;
    Ok(F::of(raw.clamp(0.0, 1.0)))
}

/// One event annotated with its bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionDelta<F> {
    pub event: ClassificationEvent<F>,
    pub delta: F,
}

/// Aggregate misclassification-probability diagnostics of a finished run.
#[derive(Debug, Clone)]
pub struct ConfidenceDiagnostics<F> {
    /// Significance per tree level (index 0 is level 1).
    pub alpha_levels: Vec<F>,
    /// Per-event bounds.
    pub deltas: Vec<RegionDelta<F>>,
    /// Per-iteration products over positive (new + reclassified) events
    /// (index 0 is iteration 1).
    pub gamma_positive: Vec<F>,
    /// Per-iteration products over negative events.
    pub gamma_negative: Vec<F>,
    /// Per-level products over positive events (index 0 is level 1).
    pub eta_positive: Vec<F>,
    /// Per-level products over negative events.
    pub eta_negative: Vec<F>,
    /// Final product bound attached to the satisfying-volume statement.
    pub positive_volume_bound: F,
    /// Final product bound attached to the violating-volume statement.
    pub negative_volume_bound: F,
}

impl<F: Scalar> ConfidenceDiagnostics<F> {
    /// Computes every reported quantity from the classification history.
    pub fn from_events(
        config: &PartXConfig<F>,
        events: &[ClassificationEvent<F>],
        iterations: usize,
    ) -> Result<Self> {
        let max_level = events.iter().map(|e| e.level).max().unwrap_or(1).max(1);
        let alpha_levels = significance_schedule(config.significance, config.branching, max_level);

        let mut deltas = Vec::with_capacity(events.len());
        for event in events {
            debug_assert!(event.level >= 1, "classified regions sit below the root");
            let alpha = alpha_levels[(event.level - 1).min(alpha_levels.len() - 1)];
            let delta = pac_delta(event.probability, alpha, event.samples)?;
            deltas.push(RegionDelta { event: *event, delta });
        }

        let product = |filter: &dyn Fn(&RegionDelta<F>) -> bool| -> F {
            deltas
                .iter()
                .filter(|d| filter(d))
                .fold(F::one(), |acc, d| acc * (F::one() - d.delta))
        };

        let mut gamma_positive = Vec::with_capacity(iterations);
        let mut gamma_negative = Vec::with_capacity(iterations);
        for k in 1..=iterations {
            gamma_positive.push(product(&|d| {
                d.event.iteration == k && d.event.kind.counts_positive()
            }));
            gamma_negative.push(product(&|d| {
                d.event.iteration == k && !d.event.kind.counts_positive()
            }));
        }

        let mut eta_positive = Vec::with_capacity(max_level);
        let mut eta_negative = Vec::with_capacity(max_level);
        for j in 1..=max_level {
            eta_positive.push(product(&|d| {
                d.event.level == j && d.event.kind.counts_positive()
            }));
            eta_negative.push(product(&|d| {
                d.event.level == j && !d.event.kind.counts_positive()
            }));
        }

        // Final bounds: products over iterations past the first, the
        // opposite-sign gamma once and the own-sign gamma squared.
        let tail = |v: &[F]| v.iter().skip(1).fold(F::one(), |a, g| a * *g);
        let gp = tail(&gamma_positive);
        let gm = tail(&gamma_negative);
        let positive_volume_bound = (gm * gp * gp).max(F::zero()).min(F::one());
        let negative_volume_bound = (gp * gm * gm).max(F::zero()).min(F::one());

        Ok(Self {
            alpha_levels,
            deltas,
            gamma_positive,
            gamma_negative,
            eta_positive,
            eta_negative,
            positive_volume_bound,
            negative_volume_bound,
        })
    }

    /// Every reported probability, for range checks.
    pub fn all_probabilities(&self) -> Vec<F> {
        let mut out = Vec::new();
        out.extend(self.alpha_levels.iter().copied());
        out.extend(self.deltas.iter().map(|d| d.delta));
        out.extend(self.gamma_positive.iter().copied());
        out.extend(self.gamma_negative.iter().copied());
        out.extend(self.eta_positive.iter().copied());
        out.extend(self.eta_negative.iter().copied());
        out.push(self.positive_volume_bound);
        out.push(self.negative_volume_bound);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn significance_recursion() {
        let a = significance_schedule(0.05f64, 2, 3);
        assert_eq!(a, vec![0.05, 0.025, 0.0125]);
        let b = significance_schedule(0.05f64, 3, 4);
        assert_abs_diff_eq!(b[3], 0.05 / 27.0, epsilon = 1e-15);
    }

    #[test]
    fn delta_closed_form_hand_value() {
        // p = 1, alpha = 1, n = 10 -> (0 + 0 + 2 ln 10 + 1)/10
        let d = pac_delta(1.0f64, 1.0, 10).unwrap();
        assert_abs_diff_eq!(d, 0.56052, epsilon = 1e-5);
    }

    #[test]
    fn delta_clamps_and_decreases_with_samples() {
        // small n pushes the raw bound past 1
        assert_eq!(pac_delta(0.5f64, 0.05, 1).unwrap(), 1.0);
        let mut last = 2.0f64;
        for n in [10usize, 30, 100, 1000, 10_000] {
            let d = pac_delta(0.5f64, 0.05, n).unwrap();
            assert!(d < last);
            last = d;
        }
        assert!(matches!(
            pac_delta(0.0f64, 0.05, 10),
            Err(PartXError::InvalidProbability(_))
        ));
    }

    #[test]
    fn empty_iterations_have_unit_products() {
        let config = PartXConfig::<f64>::default();
        let events = [ClassificationEvent {
            kind: EventKind::NewNegative,
            level: 2,
            iteration: 2,
            samples: 25,
            probability: 0.9,
        }];
        let diag = ConfidenceDiagnostics::from_events(&config, &events, 3).unwrap();
        assert_eq!(diag.gamma_positive, vec![1.0, 1.0, 1.0]);
        assert_eq!(diag.gamma_negative[0], 1.0);
        assert!(diag.gamma_negative[1] < 1.0);
        assert_eq!(diag.gamma_negative[2], 1.0);
        for p in diag.all_probabilities() {
            assert!((0.0..=1.0).contains(&p));
        }
    }
}
