//! Gaussian-process surrogate with a separable squared-exponential kernel.
//!
//! The process is `Y(x) = mu + Z(x)` with `Z ~ GP(0, tau^2 R)` and
//! `R_ij = prod_l exp(-theta_l (x_il - x_jl)^2)`. Mean and variance are
//! estimated by their closed-form maximum-likelihood expressions given the
//! length-scale vector `theta`; `theta` itself is chosen by maximizing the
//! profile log-likelihood with a deterministic multi-start pattern search.
//!
//! Inputs are normalized to the unit cube of the region the model belongs to
//! before fitting, which keeps the `theta` search range comparable across
//! regions of very different sizes.

use crate::error::{PartXError, Result};
use crate::geom::Hyperbox;
use crate::linalg::CholeskyFactor;
use crate::scalar::Scalar;
use crate::stats::normal_inv_cdf;

/// Jitter ladder added to the correlation diagonal when factorization fails.
const JITTER_LADDER: [f64; 5] = [1e-10, 1e-9, 1e-8, 1e-7, 1e-6];

/// log10 bounds of the length-scale search box.
const LOG_THETA_MIN: f64 = -3.0;
const LOG_THETA_MAX: f64 = 3.0;

/// Search starts, shared by every dimension.
const LOG_THETA_STARTS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

/// Likelihood evaluations allowed per start.
const THETA_EVAL_BUDGET: usize = 60;

/// Immutable training data: points with their observed values.
#[derive(Debug, Clone)]
pub struct TrainingSet<F> {
    points: Vec<Vec<F>>,
    values: Vec<F>,
}

impl<F: Scalar> TrainingSet<F> {
    /// Builds a training set, dropping exact duplicate points (first
    /// occurrence wins). Needs at least two distinct points.
    pub fn new(points: Vec<Vec<F>>, values: Vec<F>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(PartXError::InvalidTrainingSet(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        let dim = points.first().map(Vec::len).unwrap_or(0);
        let mut set = Self {
            points: Vec::with_capacity(points.len()),
            values: Vec::with_capacity(values.len()),
        };
        for (p, v) in points.into_iter().zip(values) {
            if p.len() != dim {
                return Err(PartXError::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            if !v.is_finite() || p.iter().any(|x| !x.is_finite()) {
                return Err(PartXError::InvalidTrainingSet(
                    "non-finite training value or coordinate".into(),
                ));
            }
            set.push(p, v);
        }
        if set.len() < 2 {
            return Err(PartXError::InvalidTrainingSet(format!(
                "needs at least 2 distinct points, got {}",
                set.len()
            )));
        }
        Ok(set)
    }

    /// Appends a point unless it exactly duplicates an existing one.
    /// Returns whether the point was kept.
    pub fn push(&mut self, point: Vec<F>, value: F) -> bool {
        if self.points.iter().any(|p| p == &point) {
            return false;
        }
        self.points.push(point);
        self.values.push(value);
        true
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map(Vec::len).unwrap_or(0)
    }

    pub fn points(&self) -> &[Vec<F>] {
        &self.points
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }
}

/// Pointwise posterior of the surrogate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction<F> {
    pub mean: F,
    pub variance: F,
}

/// Anything that yields a posterior mean/variance at a point. The partition
/// and sampling machinery only needs this surface, which also makes the
/// Monte-Carlo steps testable against hand-built fields.
pub trait Surrogate<F: Scalar> {
    fn predict(&self, x: &[F]) -> Result<Prediction<F>>;

    /// Pointwise predictive quantile `mean + z_level * sd`, nondecreasing in
    /// `level`.
    fn quantile(&self, x: &[F], level: F) -> Result<F> {
        let z =
            normal_inv_cdf(level).ok_or_else(|| PartXError::InvalidLevel(level.as_f64()))?;
        let p = self.predict(x)?;
        Ok(p.mean + z * p.variance.sqrt())
    }
}

/// Fitted Gaussian process over one region.
#[derive(Debug, Clone)]
pub struct GaussianProcess<F> {
    /// Inverse-squared-length-scales in normalized coordinates.
    theta: Vec<F>,
    mu: F,
    tau2: F,
    /// Training inputs mapped to the unit cube of `domain`.
    normalized: Vec<Vec<F>>,
    training: TrainingSet<F>,
    chol: CholeskyFactor<F>,
    /// R^{-1} (y - mu 1)
    alpha: Vec<F>,
    /// R^{-1} 1
    r_inv_one: Vec<F>,
    /// 1' R^{-1} 1
    one_r_one: F,
    domain: Hyperbox<F>,
    jitter: f64,
}

impl<F: Scalar> GaussianProcess<F> {
    /// Fits mean, variance, and length-scales on `training`, normalizing
    /// inputs by `domain`.
    pub fn fit(training: TrainingSet<F>, domain: &Hyperbox<F>) -> Result<Self> {
        if training.dim() != domain.dim() {
            return Err(PartXError::DimensionMismatch {
                expected: domain.dim(),
                found: training.dim(),
            });
        }
        let normalized: Vec<Vec<F>> =
            training.points().iter().map(|p| domain.normalize(p)).collect();
        if constant_values(training.values()) {
            // Degenerate design: zero residual variance for any theta.
            let theta = vec![F::one(); training.dim()];
            return assemble(training, normalized, domain.clone(), theta);
        }
        let theta = search_theta(&normalized, training.values())?;
        assemble(training, normalized, domain.clone(), theta)
    }

    /// Fits mean and variance with the length-scales held fixed.
    pub fn fit_with_theta(
        training: TrainingSet<F>,
        domain: &Hyperbox<F>,
        theta: Vec<F>,
    ) -> Result<Self> {
        if training.dim() != domain.dim() {
            return Err(PartXError::DimensionMismatch {
                expected: domain.dim(),
                found: training.dim(),
            });
        }
        if theta.len() != training.dim() || theta.iter().any(|t| !(*t > F::zero())) {
            return Err(PartXError::InvalidTrainingSet(
                "theta must be positive and match the input dimension".into(),
            ));
        }
        let normalized: Vec<Vec<F>> =
            training.points().iter().map(|p| domain.normalize(p)).collect();
        assemble(training, normalized, domain.clone(), theta)
    }

    pub fn theta(&self) -> &[F] {
        &self.theta
    }

    pub fn mu(&self) -> F {
        self.mu
    }

    pub fn tau2(&self) -> F {
        self.tau2
    }

    /// True when every training value was identical, which pins the process
    /// variance at zero.
    pub fn is_degenerate(&self) -> bool {
        self.tau2 == F::zero()
    }

    pub fn training(&self) -> &TrainingSet<F> {
        &self.training
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    fn correlation_to(&self, u: &[F]) -> Vec<F> {
        self.normalized
            .iter()
            .map(|row| {
                let mut acc = F::zero();
                for l in 0..u.len() {
                    let d = u[l] - row[l];
                    acc = acc + self.theta[l] * d * d;
                }
                (-acc).exp()
            })
            .collect()
    }
}

impl<F: Scalar> Surrogate<F> for GaussianProcess<F> {
    fn predict(&self, x: &[F]) -> Result<Prediction<F>> {
        if x.len() != self.domain.dim() {
            return Err(PartXError::DimensionMismatch {
                expected: self.domain.dim(),
                found: x.len(),
            });
        }
        let u = self.domain.normalize(x);
        let r = self.correlation_to(&u);
        let mean = self.mu + dot(&r, &self.alpha);
        if self.tau2 == F::zero() {
            return Ok(Prediction {
                mean,
                variance: F::zero(),
            });
        }
        let mut z = r.clone();
        self.chol.solve_lower(&mut z);
        let r_rinv_r = dot(&z, &z);
        let one_rinv_r = dot(&self.r_inv_one, &r);
        let bias = F::one() - one_rinv_r;
        let variance =
            self.tau2 * (F::one() - r_rinv_r + bias * bias / self.one_r_one);
        Ok(Prediction {
            mean,
            variance: variance.max(F::zero()),
        })
    }
}

fn constant_values<F: Scalar>(values: &[F]) -> bool {
    values.windows(2).all(|w| w[0] == w[1])
}

fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc + *x * *y)
}

/// Builds the correlation matrix for `theta` and factorizes it, climbing the
/// jitter ladder on failure. The ladder is deterministic, so refitting the
/// same data always lands on the same factorization.
fn factorize_correlation<F: Scalar>(
    normalized: &[Vec<F>],
    theta: &[F],
) -> Option<(CholeskyFactor<F>, f64)> {
    let n = normalized.len();
    let mut matrix = vec![F::zero(); n * n];
    for i in 0..n {
        matrix[i * n + i] = F::one();
        for j in 0..i {
            let mut acc = F::zero();
            for l in 0..theta.len() {
                let d = normalized[i][l] - normalized[j][l];
                acc = acc + theta[l] * d * d;
            }
            let v = (-acc).exp();
            matrix[i * n + j] = v;
            matrix[j * n + i] = v;
        }
    }
    for &jitter in &JITTER_LADDER {
        let bump = F::of(jitter);
        for i in 0..n {
            matrix[i * n + i] = F::one() + bump;
        }
        if let Some(chol) = CholeskyFactor::factorize(&matrix, n) {
            return Some((chol, jitter));
        }
    }
    None
}

struct LikelihoodPieces<F> {
    mu: F,
    tau2: F,
    log_likelihood: f64,
}

fn profile_likelihood<F: Scalar>(
    normalized: &[Vec<F>],
    values: &[F],
    theta: &[F],
) -> Option<(LikelihoodPieces<F>, CholeskyFactor<F>, f64)> {
    let n = values.len();
    let (chol, jitter) = factorize_correlation(normalized, theta)?;
    let mut a: Vec<F> = values.to_vec();
    chol.solve_lower(&mut a);
    let mut b = vec![F::one(); n];
    chol.solve_lower(&mut b);
    let one_r_one = dot(&b, &b);
    let mu = dot(&b, &a) / one_r_one;
    let mut resid_sq = F::zero();
    for i in 0..n {
        let c = a[i] - mu * b[i];
        resid_sq = resid_sq + c * c;
    }
    let tau2 = resid_sq / F::of_usize(n);
    let tau2_for_log = tau2.as_f64().max(f64::MIN_POSITIVE);
    let ll = -0.5 * (n as f64 * tau2_for_log.ln() + chol.log_det().as_f64());
    Some((
        LikelihoodPieces {
            mu,
            tau2,
            log_likelihood: ll,
        },
        chol,
        jitter,
    ))
}

/// Deterministic multi-start pattern search over log10(theta).
fn search_theta<F: Scalar>(normalized: &[Vec<F>], values: &[F]) -> Result<Vec<F>> {
    let dim = normalized[0].len();
    let eval = |log_theta: &[f64]| -> Option<f64> {
        let theta: Vec<F> = log_theta.iter().map(|t| F::of(10f64.powf(*t))).collect();
        profile_likelihood(normalized, values, &theta).map(|(p, _, _)| p.log_likelihood)
    };

    let mut best: Option<(f64, Vec<f64>)> = None;
    for start in LOG_THETA_STARTS {
        let mut here = vec![start; dim];
        let Some(mut score) = eval(&here) else { continue };
        let mut evals = 1usize;
        let mut step = 0.5f64;
        while step >= 0.05 && evals < THETA_EVAL_BUDGET {
            let mut improved = false;
            for l in 0..dim {
                for dir in [step, -step] {
                    let candidate = (here[l] + dir).clamp(LOG_THETA_MIN, LOG_THETA_MAX);
                    if candidate == here[l] {
                        continue;
                    }
                    let mut probe = here.clone();
                    probe[l] = candidate;
                    evals += 1;
                    if let Some(s) = eval(&probe) {
                        if s > score {
                            score = s;
                            here = probe;
                            improved = true;
                            break;
                        }
                    }
                    if evals >= THETA_EVAL_BUDGET {
                        break;
                    }
                }
                if evals >= THETA_EVAL_BUDGET {
                    break;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if best.as_ref().map(|(s, _)| score > *s).unwrap_or(true) {
            best = Some((score, here));
        }
    }
    let (_, log_theta) = best.ok_or(PartXError::FactorizationFailure {
        max_jitter: JITTER_LADDER[JITTER_LADDER.len() - 1],
    })?;
    Ok(log_theta.iter().map(|t| F::of(10f64.powf(*t))).collect())
}

fn assemble<F: Scalar>(
    training: TrainingSet<F>,
    normalized: Vec<Vec<F>>,
    domain: Hyperbox<F>,
    theta: Vec<F>,
) -> Result<GaussianProcess<F>> {
    let (pieces, chol, jitter) = profile_likelihood(&normalized, training.values(), &theta)
        .ok_or(PartXError::FactorizationFailure {
            max_jitter: JITTER_LADDER[JITTER_LADDER.len() - 1],
        })?;
    let n = training.len();
    let mut resid: Vec<F> = training
        .values()
        .iter()
        .map(|y| *y - pieces.mu)
        .collect();
    let alpha = chol.solve(&resid);
    resid.iter_mut().for_each(|v| *v = F::one());
    let r_inv_one = chol.solve(&resid);
    let one_r_one = r_inv_one.iter().fold(F::zero(), |acc, v| acc + *v);
    debug_assert_eq!(alpha.len(), n);
    Ok(GaussianProcess {
        theta,
        mu: pieces.mu,
        tau2: pieces.tau2.max(F::zero()),
        normalized,
        training,
        chol,
        alpha,
        r_inv_one,
        one_r_one,
        domain,
        jitter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn unit_box(dim: usize) -> Hyperbox<f64> {
        Hyperbox::unit(dim)
    }

    /// Explicit-inverse evaluation of the predictor equations, written
    /// independently of the Cholesky path (Gauss-Jordan inverse).
    mod dense_oracle {
        pub fn invert(a: &[f64], n: usize) -> Vec<f64> {
            let mut aug = vec![0.0; n * 2 * n];
            for i in 0..n {
                for j in 0..n {
                    aug[i * 2 * n + j] = a[i * n + j];
                }
                aug[i * 2 * n + n + i] = 1.0;
            }
            for col in 0..n {
                let pivot = (col..n)
                    .max_by(|&i, &j| {
                        aug[i * 2 * n + col]
                            .abs()
                            .partial_cmp(&aug[j * 2 * n + col].abs())
                            .unwrap()
                    })
                    .unwrap();
                if pivot != col {
                    for j in 0..2 * n {
                        aug.swap(col * 2 * n + j, pivot * 2 * n + j);
                    }
                }
                let p = aug[col * 2 * n + col];
                for j in 0..2 * n {
                    aug[col * 2 * n + j] /= p;
                }
                for i in 0..n {
                    if i != col {
                        let f = aug[i * 2 * n + col];
                        for j in 0..2 * n {
                            aug[i * 2 * n + j] -= f * aug[col * 2 * n + j];
                        }
                    }
                }
            }
            let mut inv = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    inv[i * n + j] = aug[i * 2 * n + n + j];
                }
            }
            inv
        }

        /// mean/variance at `x` per the predictor and model-variance
        /// equations, using the explicit inverse of R (+`jitter` diagonal).
        pub fn predict(
            points: &[Vec<f64>],
            values: &[f64],
            theta: &[f64],
            jitter: f64,
            x: &[f64],
        ) -> (f64, f64) {
            let n = points.len();
            let kernel = |a: &[f64], b: &[f64]| {
                let s: f64 = theta
                    .iter()
                    .enumerate()
                    .map(|(l, t)| t * (a[l] - b[l]).powi(2))
                    .sum();
                (-s).exp()
            };
            let mut rmat = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    rmat[i * n + j] = kernel(&points[i], &points[j]);
                }
                rmat[i * n + i] = 1.0 + jitter;
            }
            let rinv = invert(&rmat, n);
            let matvec = |v: &[f64]| -> Vec<f64> {
                (0..n)
                    .map(|i| (0..n).map(|j| rinv[i * n + j] * v[j]).sum())
                    .collect()
            };
            let ones = vec![1.0; n];
            let ri_one = matvec(&ones);
            let ri_y = matvec(values);
            let one_r_one: f64 = ri_one.iter().sum();
            let one_r_y: f64 = ri_y.iter().sum();
            let mu = one_r_y / one_r_one;
            let resid: Vec<f64> = values.iter().map(|y| y - mu).collect();
            let ri_resid = matvec(&resid);
            let tau2: f64 =
                resid.iter().zip(&ri_resid).map(|(a, b)| a * b).sum::<f64>() / n as f64;
            let r: Vec<f64> = points.iter().map(|p| kernel(p, x)).collect();
            let ri_r = matvec(&r);
            let mean: f64 =
                mu + r.iter().zip(&ri_resid).map(|(a, b)| a * b).sum::<f64>();
            let r_r: f64 = r.iter().zip(&ri_r).map(|(a, b)| a * b).sum();
            let one_r: f64 = ri_r.iter().sum();
            let var = tau2 * (1.0 - r_r + (1.0 - one_r).powi(2) / one_r_one);
            (mean, var.max(0.0))
        }
    }

    #[test]
    fn constant_values_give_zero_variance() {
        let t = TrainingSet::new(vec![vec![0.0], vec![1.0]], vec![3.5, 3.5]).unwrap();
        let gp = GaussianProcess::fit(t, &unit_box(1)).unwrap();
        assert_eq!(gp.mu(), 3.5);
        assert_eq!(gp.tau2(), 0.0);
        assert!(gp.is_degenerate());
        let p = gp.predict(&[0.3]).unwrap();
        assert_eq!(p.mean, 3.5);
        assert_eq!(p.variance, 0.0);
    }

    #[test]
    fn interpolates_training_data() {
        let pts = vec![
            vec![0.05, 0.1],
            vec![0.4, 0.9],
            vec![0.75, 0.3],
            vec![0.9, 0.85],
            vec![0.2, 0.6],
        ];
        let vals: Vec<f64> = pts.iter().map(|p| (3.0 * p[0]).sin() + p[1] * p[1]).collect();
        let t = TrainingSet::new(pts.clone(), vals.clone()).unwrap();
        let gp = GaussianProcess::fit(t, &unit_box(2)).unwrap();
        for (p, v) in pts.iter().zip(&vals) {
            let pred = gp.predict(p).unwrap();
            assert_abs_diff_eq!(pred.mean, *v, epsilon = 1e-6);
            assert!(pred.variance <= 1e-6 * gp.tau2());
        }
    }

    #[test]
    fn three_point_closed_form_oracle() {
        // Frozen from an independent dense solve (numpy, explicit inverse):
        // mu = 1.7508504687596083, tau2 = 2.6384217404723698,
        // prediction at 0.25 = (0.2879897846201307, 0.00692755985511724).
        let t = TrainingSet::new(
            vec![vec![0.0], vec![0.5], vec![1.0]],
            vec![1.0, 0.0, 1.0],
        )
        .unwrap();
        let gp = GaussianProcess::fit_with_theta(t, &unit_box(1), vec![1.0]).unwrap();
        assert_abs_diff_eq!(gp.mu(), 1.7508504687596083, epsilon = 1e-8);
        assert_abs_diff_eq!(gp.tau2(), 2.6384217404723698, epsilon = 1e-8);
        let p = gp.predict(&[0.25]).unwrap();
        assert_abs_diff_eq!(p.mean, 0.2879897846201307, epsilon = 1e-8);
        assert_abs_diff_eq!(p.variance, 0.00692755985511724, epsilon = 1e-8);

        // Same case against the in-test dense path with matching jitter.
        let (m, v) = dense_oracle::predict(
            &[vec![0.0], vec![0.5], vec![1.0]],
            &[1.0, 0.0, 1.0],
            &[1.0],
            gp.jitter(),
            &[0.25],
        );
        assert_abs_diff_eq!(p.mean, m, epsilon = 1e-10);
        assert_abs_diff_eq!(p.variance, v, epsilon = 1e-10);
    }

    #[test]
    fn far_field_reverts_to_process_mean() {
        let t = TrainingSet::new(
            vec![vec![0.0], vec![0.5], vec![1.0]],
            vec![1.0, 0.0, 1.0],
        )
        .unwrap();
        let gp = GaussianProcess::fit_with_theta(t, &unit_box(1), vec![1.0]).unwrap();
        let p = gp.predict(&[1.0e6]).unwrap();
        assert_abs_diff_eq!(p.mean, gp.mu(), epsilon = 1e-9);
        // tau2 * (1 + 1 / (1' R^-1 1)) for this design
        assert_abs_diff_eq!(p.variance, 4.255017692959494, epsilon = 1e-6);
    }

    #[test]
    fn quantile_levels() {
        let t = TrainingSet::new(
            vec![vec![0.0], vec![0.5], vec![1.0]],
            vec![1.0, 0.0, 1.0],
        )
        .unwrap();
        let gp = GaussianProcess::fit_with_theta(t, &unit_box(1), vec![1.0]).unwrap();
        let x = [0.25];
        let p = gp.predict(&x).unwrap();
        assert_eq!(gp.quantile(&x, 0.5).unwrap(), p.mean);
        let q = gp.quantile(&x, 0.975).unwrap();
        assert_abs_diff_eq!(
            q,
            p.mean + 1.959964 * p.variance.sqrt(),
            epsilon = 1e-4 * p.variance.sqrt().max(1.0)
        );
        assert!(matches!(
            gp.quantile(&x, 1.0),
            Err(PartXError::InvalidLevel(_))
        ));

        // degenerate: every level returns the mean
        let c = TrainingSet::new(vec![vec![0.0], vec![1.0]], vec![2.0, 2.0]).unwrap();
        let gp0 = GaussianProcess::fit(c, &unit_box(1)).unwrap();
        for level in [0.01, 0.5, 0.99] {
            assert_eq!(gp0.quantile(&[0.4], level).unwrap(), 2.0);
        }
    }

    #[test]
    fn standard_normal_quantile_value() {
        // mean 0, variance 1 at level 0.975 must reproduce z = 1.959964.
        struct Unit;
        impl Surrogate<f64> for Unit {
            fn predict(&self, _: &[f64]) -> crate::error::Result<Prediction<f64>> {
                Ok(Prediction {
                    mean: 0.0,
                    variance: 1.0,
                })
            }
        }
        let q = Unit.quantile(&[0.0], 0.975).unwrap();
        assert_abs_diff_eq!(q, 1.959964, epsilon = 1e-4);
    }

    #[test]
    fn permutation_of_training_pairs_is_irrelevant() {
        let pts = vec![vec![0.1], vec![0.35], vec![0.6], vec![0.95]];
        let vals = vec![2.0, -1.0, 0.5, 3.0];
        let t1 = TrainingSet::new(pts.clone(), vals.clone()).unwrap();
        let gp1 = GaussianProcess::fit_with_theta(t1, &unit_box(1), vec![2.0]).unwrap();
        let perm = [2usize, 0, 3, 1];
        let t2 = TrainingSet::new(
            perm.iter().map(|&i| pts[i].clone()).collect(),
            perm.iter().map(|&i| vals[i]).collect(),
        )
        .unwrap();
        let gp2 = GaussianProcess::fit_with_theta(t2, &unit_box(1), vec![2.0]).unwrap();
        for x in [0.0, 0.2, 0.5, 0.77, 1.0] {
            let a = gp1.predict(&[x]).unwrap();
            let b = gp2.predict(&[x]).unwrap();
            assert_abs_diff_eq!(a.mean, b.mean, epsilon = 1e-10);
            assert_abs_diff_eq!(a.variance, b.variance, epsilon = 1e-10);
        }
    }

    #[test]
    fn duplicates_are_dropped_keeping_first() {
        let t = TrainingSet::new(
            vec![vec![0.0], vec![0.0], vec![1.0]],
            vec![5.0, 9.0, 7.0],
        )
        .unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.values(), &[5.0, 7.0]);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let t = TrainingSet::new(vec![vec![0.0], vec![1.0]], vec![1.0, 2.0]).unwrap();
        let gp = GaussianProcess::fit(t, &unit_box(1)).unwrap();
        assert!(matches!(
            gp.predict(&[0.0, 0.0]),
            Err(PartXError::DimensionMismatch { .. })
        ));
        let t2 = TrainingSet::new(vec![vec![0.0], vec![1.0]], vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            GaussianProcess::fit(t2, &unit_box(2)),
            Err(PartXError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn quantile_is_monotone_in_level() {
        let t = TrainingSet::new(
            vec![vec![0.1, 0.2], vec![0.8, 0.4], vec![0.5, 0.9]],
            vec![1.0, -2.0, 0.3],
        )
        .unwrap();
        let gp = GaussianProcess::fit(t, &unit_box(2)).unwrap();
        let x = [0.33, 0.57];
        let mut last = f64::NEG_INFINITY;
        for i in 1..100 {
            let q = gp.quantile(&x, i as f64 / 100.0).unwrap();
            assert!(q >= last);
            last = q;
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn matches_dense_oracle_on_small_designs(
            n in 3usize..=10,
            d in 1usize..=3,
            seed in 0u64..5000,
            qx in 0.0f64..1.0,
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..d).map(|_| rng.random::<f64>()).collect())
                .collect();
            let vals: Vec<f64> = pts
                .iter()
                .map(|p| p.iter().map(|x| (4.0 * x).sin()).sum::<f64>())
                .collect();
            let theta: Vec<f64> = (0..d).map(|_| 0.5 + 4.0 * rng.random::<f64>()).collect();
            let t = TrainingSet::new(pts.clone(), vals.clone()).unwrap();
            prop_assume!(t.len() == n);
            let gp = GaussianProcess::fit_with_theta(t, &unit_box(d), theta.clone()).unwrap();
            let x = vec![qx; d];
            let got = gp.predict(&x).unwrap();
            let (m, v) = dense_oracle::predict(&pts, &vals, &theta, gp.jitter(), &x);
            prop_assert!((got.mean - m).abs() <= 1e-8 * (1.0 + m.abs()));
            prop_assert!((got.variance - v).abs() <= 1e-8 * (1.0 + v.abs()));
        }
    }
}
