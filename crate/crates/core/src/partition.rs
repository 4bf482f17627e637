//! The partition tree: typed hyperbox leaves, branching, Monte-Carlo
//! min/max quantile estimation, and the classification automaton.

use rand::Rng;

use crate::error::{PartXError, Result};
use crate::geom::Hyperbox;
use crate::gp::{GaussianProcess, Surrogate};
use crate::sampling::SampleBatch;
use crate::scalar::Scalar;
use crate::stats::normal_inv_cdf;

/// Classification state of a leaf.
///
/// `Remaining` regions are still being refined; `Satisfying`/`Violating` are
/// provisional decisions that later evidence may revert to the reclassified
/// states; `Unbranchable` marks regions at the volume floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionLabel {
    Satisfying,
    Violating,
    ReclassifiedPositive,
    ReclassifiedNegative,
    Remaining,
    Unbranchable,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 6] = [
        RegionLabel::Satisfying,
        RegionLabel::Violating,
        RegionLabel::ReclassifiedPositive,
        RegionLabel::ReclassifiedNegative,
        RegionLabel::Remaining,
        RegionLabel::Unbranchable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RegionLabel::Satisfying => "+",
            RegionLabel::Violating => "-",
            RegionLabel::ReclassifiedPositive => "r+",
            RegionLabel::ReclassifiedNegative => "r-",
            RegionLabel::Remaining => "r",
            RegionLabel::Unbranchable => "u",
        }
    }

    /// Labels that the branching stage splits into `Remaining` children.
    pub fn is_branch_candidate(self) -> bool {
        matches!(
            self,
            RegionLabel::Remaining
                | RegionLabel::ReclassifiedPositive
                | RegionLabel::ReclassifiedNegative
        )
    }

    /// Provisionally classified labels that receive the shared budget.
    pub fn is_classified(self) -> bool {
        matches!(self, RegionLabel::Satisfying | RegionLabel::Violating)
    }
}

impl std::fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Replicate means and mean-variances of the extreme predictive quantiles
/// over a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileEstimate<F> {
    pub q_max_mean: F,
    pub q_max_var: F,
    pub q_min_mean: F,
    pub q_min_var: F,
}

/// One leaf (or historical node) of the partition.
#[derive(Debug, Clone)]
pub struct Subregion<F> {
    pub bounds: Hyperbox<F>,
    pub label: RegionLabel,
    /// Depth in the tree; the root sits at level 0.
    pub level: usize,
    /// Iteration at which the region was created.
    pub birth_iteration: usize,
    pub samples: SampleBatch<F>,
    pub model: Option<GaussianProcess<F>>,
    pub quantiles: Option<QuantileEstimate<F>>,
}

impl<F: Scalar> Subregion<F> {
    fn new(bounds: Hyperbox<F>, level: usize, birth_iteration: usize) -> Self {
        Self {
            bounds,
            label: RegionLabel::Remaining,
            level,
            birth_iteration,
            samples: SampleBatch::new(),
            model: None,
            quantiles: None,
        }
    }
}

struct Node<F> {
    region: Subregion<F>,
    parent: Option<usize>,
    children: Vec<usize>,
}

/// Arena-backed partition tree. Node ids are stable and assigned in creation
/// order, which keeps every traversal deterministic.
pub struct PartitionTree<F> {
    nodes: Vec<Node<F>>,
    root_extents: Vec<F>,
}

/// Leaf ids grouped by classification state; each leaf appears in exactly
/// one group.
#[derive(Debug, Clone, Default)]
pub struct ClassificationSets {
    pub satisfying: Vec<usize>,
    pub violating: Vec<usize>,
    pub reclassified_positive: Vec<usize>,
    pub reclassified_negative: Vec<usize>,
    pub remaining: Vec<usize>,
    pub unbranchable: Vec<usize>,
}

impl ClassificationSets {
    fn bucket(&mut self, label: RegionLabel) -> &mut Vec<usize> {
        match label {
            RegionLabel::Satisfying => &mut self.satisfying,
            RegionLabel::Violating => &mut self.violating,
            RegionLabel::ReclassifiedPositive => &mut self.reclassified_positive,
            RegionLabel::ReclassifiedNegative => &mut self.reclassified_negative,
            RegionLabel::Remaining => &mut self.remaining,
            RegionLabel::Unbranchable => &mut self.unbranchable,
        }
    }
}

/// Flat leaf description for dumps and reports.
#[derive(Debug, Clone)]
pub struct LeafRecord<F> {
    pub lower: Vec<F>,
    pub upper: Vec<F>,
    pub label: RegionLabel,
    pub level: usize,
    pub birth_iteration: usize,
    pub sample_count: usize,
    pub q_min_mean: Option<F>,
    pub q_max_mean: Option<F>,
}

impl<F: Scalar> PartitionTree<F> {
    pub fn new(domain: Hyperbox<F>) -> Self {
        let root_extents = domain.extents();
        let root = Node {
            region: Subregion::new(domain, 0, 0),
            parent: None,
            children: Vec::new(),
        };
        Self {
            nodes: vec![root],
            root_extents,
        }
    }

    pub fn dim(&self) -> usize {
        self.root_extents.len()
    }

    pub fn root_extents(&self) -> &[F] {
        &self.root_extents
    }

    pub fn domain(&self) -> &Hyperbox<F> {
        &self.nodes[0].region.bounds
    }

    pub fn domain_volume(&self) -> F {
        self.nodes[0].region.bounds.volume()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        self.nodes[id].children.is_empty()
    }

    pub fn region(&self, id: usize) -> &Subregion<F> {
        &self.nodes[id].region
    }

    pub fn region_mut(&mut self, id: usize) -> &mut Subregion<F> {
        &mut self.nodes[id].region
    }

    /// Leaf ids in ascending creation order.
    pub fn leaf_ids(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.is_leaf(i)).collect()
    }

    pub fn leaves_labeled(&self, label: RegionLabel) -> Vec<usize> {
        self.leaf_ids()
            .into_iter()
            .filter(|&i| self.nodes[i].region.label == label)
            .collect()
    }

    /// The model attached to the node, or the nearest ancestor's model.
    pub fn model_for(&self, id: usize) -> Option<&GaussianProcess<F>> {
        let mut cursor = Some(id);
        while let Some(i) = cursor {
            if let Some(model) = self.nodes[i].region.model.as_ref() {
                return Some(model);
            }
            cursor = self.nodes[i].parent;
        }
        None
    }

    /// Dimensions whose relative side length still allows a `pieces`-way cut
    /// without violating the volume floor.
    pub fn branchable_dims(&self, id: usize, pieces: usize, min_side_fraction: F) -> Vec<usize> {
        let region = &self.nodes[id].region;
        let threshold = F::of_usize(pieces) * min_side_fraction;
        (0..self.dim())
            .filter(|&l| region.bounds.side(l) / self.root_extents[l] > threshold)
            .collect()
    }

    /// Splits a leaf along a uniformly chosen branchable dimension into
    /// `pieces` equal-volume `Remaining` children, distributing the parent's
    /// samples by containment. Fails with `NoBranchableDimension` when every
    /// dimension is at the floor; the caller then marks the region
    /// unbranchable.
    pub fn branch<R: Rng>(
        &mut self,
        id: usize,
        pieces: usize,
        min_side_fraction: F,
        iteration: usize,
        rng: &mut R,
    ) -> Result<Vec<usize>> {
        if !self.is_leaf(id) {
            return Err(PartXError::NotALeaf(id));
        }
        let dims = self.branchable_dims(id, pieces, min_side_fraction);
        if dims.is_empty() {
            return Err(PartXError::NoBranchableDimension);
        }
        let dim = dims[rng.random_range(0..dims.len())];
        Ok(self.branch_along(id, dim, pieces, iteration))
    }

    /// Deterministic variant of [`branch`](Self::branch) with the cut
    /// dimension supplied by the caller.
    pub fn branch_along(
        &mut self,
        id: usize,
        dim: usize,
        pieces: usize,
        iteration: usize,
    ) -> Vec<usize> {
        debug_assert!(self.is_leaf(id));
        let (boxes, level, samples) = {
            let region = &self.nodes[id].region;
            (
                region.bounds.split(dim, pieces),
                region.level,
                region.samples.clone(),
            )
        };
        let batches = samples.partition_by(&boxes);
        let mut ids = Vec::with_capacity(pieces);
        for (bounds, batch) in boxes.into_iter().zip(batches) {
            let mut region = Subregion::new(bounds, level + 1, iteration);
            region.samples = batch;
            let child = self.nodes.len();
            self.nodes.push(Node {
                region,
                parent: Some(id),
                children: Vec::new(),
            });
            ids.push(child);
        }
        self.nodes[id].children = ids.clone();
        ids
    }

    /// Moves a leaf between classification sets.
    pub fn relabel(&mut self, id: usize, label: RegionLabel) -> Result<()> {
        if !self.is_leaf(id) {
            return Err(PartXError::NotALeaf(id));
        }
        self.nodes[id].region.label = label;
        Ok(())
    }

    pub fn classification_sets(&self) -> ClassificationSets {
        let mut sets = ClassificationSets::default();
        for id in self.leaf_ids() {
            sets.bucket(self.nodes[id].region.label).push(id);
        }
        sets
    }

    /// Total leaf volume carrying `label`.
    pub fn volume_labeled(&self, label: RegionLabel) -> F {
        self.leaf_ids()
            .into_iter()
            .filter(|&i| self.nodes[i].region.label == label)
            .fold(F::zero(), |acc, i| acc + self.nodes[i].region.bounds.volume())
    }

    /// Sum of all leaf volumes; tiles the domain, so this equals the domain
    /// volume up to rounding.
    pub fn total_leaf_volume(&self) -> F {
        self.leaf_ids()
            .into_iter()
            .fold(F::zero(), |acc, i| acc + self.nodes[i].region.bounds.volume())
    }

    pub fn leaf_records(&self) -> Vec<LeafRecord<F>> {
        self.leaf_ids()
            .into_iter()
            .map(|id| {
                let r = &self.nodes[id].region;
                LeafRecord {
                    lower: r.bounds.lower().to_vec(),
                    upper: r.bounds.upper().to_vec(),
                    label: r.label,
                    level: r.level,
                    birth_iteration: r.birth_iteration,
                    sample_count: r.samples.len(),
                    q_min_mean: r.quantiles.map(|q| q.q_min_mean),
                    q_max_mean: r.quantiles.map(|q| q.q_max_mean),
                }
            })
            .collect()
    }
}

/// Monte-Carlo estimation of the extreme predictive quantiles over a region.
///
/// For each of `replicates` rounds, draws `draws_per_replicate` uniform
/// points and takes the extremes of `mean ± z · sd` with
/// `z = Phi^{-1}(1 - delta_c/2)`; reports the replicate means together with
/// the variances of those means (sample variance divided by the replicate
/// count).
pub fn mc_step<F: Scalar, S: Surrogate<F>, R: Rng>(
    region: &Hyperbox<F>,
    model: &S,
    replicates: usize,
    draws_per_replicate: usize,
    delta_c: F,
    rng: &mut R,
) -> Result<QuantileEstimate<F>> {
    assert!(replicates >= 2, "mc_step needs at least two replicates");
    assert!(draws_per_replicate >= 1, "mc_step needs at least one draw");
    let level = F::one() - delta_c / F::of(2.0);
    let z = normal_inv_cdf(level).ok_or_else(|| PartXError::InvalidLevel(level.as_f64()))?;

    let mut maxima = Vec::with_capacity(replicates);
    let mut minima = Vec::with_capacity(replicates);
    for _ in 0..replicates {
        let mut hi = F::neg_infinity();
        let mut lo = F::infinity();
        for _ in 0..draws_per_replicate {
            let x = region.sample_uniform(rng);
            let p = model.predict(&x)?;
            let sd = p.variance.sqrt();
            hi = hi.max(p.mean + z * sd);
            lo = lo.min(p.mean - z * sd);
        }
        maxima.push(hi);
        minima.push(lo);
    }
    let (q_max_mean, q_max_var) = mean_and_mean_variance(&maxima);
    let (q_min_mean, q_min_var) = mean_and_mean_variance(&minima);
    Ok(QuantileEstimate {
        q_max_mean,
        q_max_var,
        q_min_mean,
        q_min_var,
    })
}

/// Mean of the replicates and the variance of that mean
/// (unbiased sample variance / count).
fn mean_and_mean_variance<F: Scalar>(values: &[F]) -> (F, F) {
    let n = F::of_usize(values.len());
    let mean = values.iter().fold(F::zero(), |a, v| a + *v) / n;
    let ss = values.iter().fold(F::zero(), |a, v| {
        let d = *v - mean;
        a + d * d
    });
    let sample_var = ss / (n - F::one());
    (mean, (sample_var / n).max(F::zero()))
}

/// The classification automaton.
///
/// The volume floor `v(region) <= prod_d delta_v * X_d` forces
/// `Unbranchable`. Otherwise the decision uses the estimated extreme
/// quantiles widened by `z * sqrt(var)` with `z = Phi^{-1}(1 - delta_c/2)`:
/// a remaining region becomes violating when the widened maximum stays below
/// zero, satisfying when the widened minimum stays above zero; classified
/// regions drop back to the reclassified states when their certifying bound
/// no longer holds.
pub fn classify<F: Scalar>(
    region: &Subregion<F>,
    delta_c: F,
    delta_v: F,
    root_extents: &[F],
) -> Result<RegionLabel> {
    let floor = root_extents
        .iter()
        .fold(F::one(), |acc, x| acc * delta_v * *x);
    if region.bounds.volume() <= floor {
        return Ok(RegionLabel::Unbranchable);
    }
    let q = region.quantiles.ok_or(PartXError::MissingQuantiles)?;
    let level = F::one() - delta_c / F::of(2.0);
    let z = normal_inv_cdf(level).ok_or_else(|| PartXError::InvalidLevel(level.as_f64()))?;
    let upper = q.q_max_mean + z * q.q_max_var.max(F::zero()).sqrt();
    let lower = q.q_min_mean - z * q.q_min_var.max(F::zero()).sqrt();
    Ok(match region.label {
        RegionLabel::Satisfying => {
            if lower <= F::zero() {
                RegionLabel::ReclassifiedPositive
            } else {
                RegionLabel::Satisfying
            }
        }
        RegionLabel::Violating => {
            if upper >= F::zero() {
                RegionLabel::ReclassifiedNegative
            } else {
                RegionLabel::Violating
            }
        }
        RegionLabel::Remaining => {
            if upper < F::zero() {
                RegionLabel::Violating
            } else if lower > F::zero() {
                RegionLabel::Satisfying
            } else {
                RegionLabel::Remaining
            }
        }
        // Reclassified and floor states never reach the classifier: they are
        // branched (or terminal) before the next classification round.
        other => other,
    })
}
