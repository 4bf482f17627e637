//! Space-filling initialization, expected-improvement sampling inside one
//! region, and the probability-mass metric that steers the classified-region
//! budget.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{PartXError, Result};
use crate::geom::Hyperbox;
use crate::gp::{GaussianProcess, Prediction, Surrogate, TrainingSet};
use crate::scalar::Scalar;
use crate::stats::{normal_cdf, normal_pdf};

/// Candidate points scored per input dimension when maximizing EI.
const EI_CANDIDATES_PER_DIM: usize = 100;

/// EI-only refinement steps after the candidate sweep.
const EI_REFINE_BUDGET: usize = 50;

/// Evaluation log of a region: points with observed objective values.
/// Duplicates may appear (each entry is one objective call); deduplication
/// happens when a training set is built for fitting.
#[derive(Debug, Clone, Default)]
pub struct SampleBatch<F> {
    points: Vec<Vec<F>>,
    values: Vec<F>,
}

impl<F: Scalar> SampleBatch<F> {
    pub fn new() -> Self {
        Self {
            points: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn push(&mut self, point: Vec<F>, value: F) {
        self.points.push(point);
        self.values.push(value);
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<F>] {
        &self.points
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    /// Index, point, and value of the smallest observed value.
    pub fn incumbent(&self) -> Option<(usize, &[F], F)> {
        let mut best: Option<usize> = None;
        for (i, v) in self.values.iter().enumerate() {
            if best.map(|b| *v < self.values[b]).unwrap_or(true) {
                best = Some(i);
            }
        }
        best.map(|i| (i, self.points[i].as_slice(), self.values[i]))
    }

    pub fn to_training_set(&self) -> Result<TrainingSet<F>> {
        TrainingSet::new(self.points.clone(), self.values.clone())
    }

    /// Splits the batch into per-child batches by containment. A point on a
    /// shared cut face goes to the first child that contains it.
    pub fn partition_by(&self, boxes: &[Hyperbox<F>]) -> Vec<SampleBatch<F>> {
        let mut out: Vec<SampleBatch<F>> = boxes.iter().map(|_| SampleBatch::new()).collect();
        for (p, v) in self.points.iter().zip(&self.values) {
            if let Some(i) = boxes.iter().position(|b| b.contains(p)) {
                out[i].push(p.clone(), *v);
            }
        }
        out
    }
}

/// Black-box objective. Infallible closures implement it directly; wrap
/// fallible ones in [`TryObjective`].
pub trait Objective<F: Scalar> {
    fn evaluate(&mut self, x: &[F]) -> std::result::Result<F, String>;
}

impl<F: Scalar, T: FnMut(&[F]) -> F> Objective<F> for T {
    fn evaluate(&mut self, x: &[F]) -> std::result::Result<F, String> {
        Ok(self(x))
    }
}

/// Adapter for objectives that can fail (external simulators and the like).
pub struct TryObjective<T>(pub T);

impl<F: Scalar, T: FnMut(&[F]) -> std::result::Result<F, String>> Objective<F>
    for TryObjective<T>
{
    fn evaluate(&mut self, x: &[F]) -> std::result::Result<F, String> {
        (self.0)(x)
    }
}

fn call_objective<F: Scalar, O: Objective<F>>(
    objective: &mut O,
    point: &[F],
) -> Result<F> {
    let as_error = |message: String| PartXError::EvaluationError {
        point: point.iter().map(|x| x.as_f64()).collect(),
        message,
    };
    let value = objective.evaluate(point).map_err(as_error)?;
    if !value.is_finite() {
        return Err(as_error(format!("non-finite objective value {value}")));
    }
    Ok(value)
}

/// Latin hypercube design: `count` points, one per stratum in every
/// dimension, uniformly jittered within strata.
pub fn latin_hypercube<F: Scalar, R: Rng>(
    region: &Hyperbox<F>,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Vec<F>>> {
    assert!(count >= 1, "latin_hypercube needs count >= 1");
    for l in 0..region.dim() {
        if !(region.side(l) > F::zero()) {
            return Err(PartXError::EmptyBox { dim: l });
        }
    }
    let dim = region.dim();
    let n = F::of_usize(count);
    let mut points = vec![vec![F::zero(); dim]; count];
    let mut strata: Vec<usize> = (0..count).collect();
    for l in 0..dim {
        strata.shuffle(rng);
        for (j, point) in points.iter_mut().enumerate() {
            let u = F::of(rng.random::<f64>());
            let frac = (F::of_usize(strata[j]) + u) / n;
            point[l] = region.lower()[l] + region.side(l) * frac;
        }
    }
    Ok(points)
}

/// Expected improvement of `x` over the incumbent minimum `f_star`:
/// `(f* - m) Phi(z) + s phi(z)` with `z = (f* - m)/s`, zero when the
/// posterior is deterministic. Never negative.
pub fn expected_improvement<F: Scalar, S: Surrogate<F>>(
    model: &S,
    x: &[F],
    f_star: F,
) -> Result<F> {
    let Prediction { mean, variance } = model.predict(x)?;
    let sd = variance.sqrt();
    if !(sd > F::zero()) {
        return Ok(F::zero());
    }
    let z = (f_star - mean) / sd;
    let ei = (f_star - mean) * normal_cdf(z) + sd * normal_pdf(z);
    Ok(ei.max(F::zero()))
}

/// Result of one region-level sampling stage.
#[derive(Debug, Clone)]
pub struct BoOutcome<F> {
    pub samples: SampleBatch<F>,
    pub model: GaussianProcess<F>,
    pub best_point: Vec<F>,
    pub best_value: F,
    /// Objective calls made by this stage.
    pub evaluations: usize,
}

/// Sequential subregion sampling with Bayesian optimization.
///
/// Tops `existing` up to `init_samples` points with a Latin hypercube design,
/// then spends `bo_samples` sequential evaluations at the EI maximizer,
/// refitting after each. The model is refit from scratch (including the
/// length-scale search) once at the start and once at the end; intermediate
/// refits keep the length-scales and update the closed-form estimates.
pub fn sample_bo<F: Scalar, O: Objective<F>, R: Rng>(
    region: &Hyperbox<F>,
    objective: &mut O,
    existing: SampleBatch<F>,
    init_samples: usize,
    bo_samples: usize,
    rng: &mut R,
) -> Result<BoOutcome<F>> {
    let mut samples = existing;
    let mut evaluations = 0usize;

    let shortfall = init_samples.saturating_sub(samples.len());
    if shortfall > 0 {
        for point in latin_hypercube(region, shortfall, rng)? {
            let value = call_objective(objective, &point)?;
            samples.push(point, value);
            evaluations += 1;
        }
    }

    let mut model = GaussianProcess::fit(samples.to_training_set()?, region)?;
    for t in 0..bo_samples {
        let f_star = samples.incumbent().expect("batch is non-empty").2;
        let point = maximize_ei(&model, region, f_star, rng)?;
        let value = call_objective(objective, &point)?;
        samples.push(point, value);
        evaluations += 1;
        let training = samples.to_training_set()?;
        model = if t + 1 == bo_samples {
            GaussianProcess::fit(training, region)?
        } else {
            GaussianProcess::fit_with_theta(training, region, model.theta().to_vec())?
        };
    }

    let (_, best_point, best_value) = samples.incumbent().expect("batch is non-empty");
    let best_point = best_point.to_vec();
    Ok(BoOutcome {
        samples,
        model,
        best_point,
        best_value,
        evaluations,
    })
}

/// Candidate-set EI maximization with a short bounded pattern-search
/// refinement. Uses no objective calls, only the surrogate.
fn maximize_ei<F: Scalar, S: Surrogate<F>, R: Rng>(
    model: &S,
    region: &Hyperbox<F>,
    f_star: F,
    rng: &mut R,
) -> Result<Vec<F>> {
    let dim = region.dim();
    let candidates = latin_hypercube(region, EI_CANDIDATES_PER_DIM * dim, rng)?;
    let mut best = candidates[0].clone();
    let mut best_score = expected_improvement(model, &best, f_star)?;
    for c in &candidates[1..] {
        let s = expected_improvement(model, c, f_star)?;
        if s > best_score {
            best_score = s;
            best = c.clone();
        }
    }

    let half = F::of(0.5);
    let mut steps: Vec<F> = (0..dim).map(|l| region.side(l) * F::of(0.1)).collect();
    let mut evals = 0usize;
    while evals < EI_REFINE_BUDGET {
        let mut improved = false;
        for l in 0..dim {
            for sign in [F::one(), -F::one()] {
                let mut probe = best.clone();
                probe[l] = (probe[l] + sign * steps[l])
                    .max(region.lower()[l])
                    .min(region.upper()[l]);
                if probe[l] == best[l] {
                    continue;
                }
                let s = expected_improvement(model, &probe, f_star)?;
                evals += 1;
                if s > best_score {
                    best_score = s;
                    best = probe;
                    improved = true;
                    break;
                }
                if evals >= EI_REFINE_BUDGET {
                    break;
                }
            }
            if evals >= EI_REFINE_BUDGET {
                break;
            }
        }
        if !improved {
            steps.iter_mut().for_each(|s| *s = *s * half);
            if steps.iter().all(|s| !(*s > F::epsilon())) {
                break;
            }
        }
    }
    Ok(best)
}

/// Monte-Carlo estimate of the region's mean posterior mass below zero:
/// the average of `Phi((0 - mean)/sd)` over uniform points, with the
/// deterministic indicator `mean < 0` where the posterior collapses.
pub fn classified_mass_metric<F: Scalar, S: Surrogate<F>, R: Rng>(
    model: &S,
    region: &Hyperbox<F>,
    mc_count: usize,
    rng: &mut R,
) -> Result<F> {
    assert!(mc_count >= 1, "classified_mass_metric needs mc_count >= 1");
    let mut acc = F::zero();
    for _ in 0..mc_count {
        let x = region.sample_uniform(rng);
        let Prediction { mean, variance } = model.predict(&x)?;
        let sd = variance.sqrt();
        let mass = if sd > F::zero() {
            normal_cdf((F::zero() - mean) / sd)
        } else if mean < F::zero() {
            F::one()
        } else {
            F::zero()
        };
        acc = acc + mass;
    }
    Ok(acc / F::of_usize(mc_count))
}

/// Largest-remainder apportionment of `total` units over `weights`
/// (ties broken toward the lowest index). All-zero weights fall back to an
/// equal split so a positive total is never silently dropped.
pub fn proportional_allocation<F: Scalar>(weights: &[F], total: usize) -> Vec<usize> {
    if weights.is_empty() || total == 0 {
        return vec![0; weights.len()];
    }
    let sanitized: Vec<f64> = weights
        .iter()
        .map(|w| {
            let w = w.as_f64();
            if w.is_finite() && w > 0.0 {
                w
            } else {
                0.0
            }
        })
        .collect();
    let sum: f64 = sanitized.iter().sum();
    let quotas: Vec<f64> = if sum > 0.0 {
        sanitized.iter().map(|w| total as f64 * w / sum).collect()
    } else {
        vec![total as f64 / sanitized.len() as f64; sanitized.len()]
    };
    let mut alloc: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = alloc.iter().sum();
    let mut order: Vec<usize> = (0..alloc.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = quotas[a] - quotas[a].floor();
        let fb = quotas[b] - quotas[b].floor();
        fb.total_cmp(&fa)
    });
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        alloc[i] += 1;
    }
    debug_assert_eq!(alloc.iter().sum::<usize>(), total);
    alloc
}
