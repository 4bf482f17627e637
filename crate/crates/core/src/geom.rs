//! Axis-aligned hyperboxes: the subregion geometry of the partition tree.

use rand::Rng;

use crate::error::{PartXError, Result};
use crate::scalar::Scalar;

/// Axis-aligned box with strictly positive side lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperbox<F> {
    lower: Vec<F>,
    upper: Vec<F>,
}

impl<F: Scalar> Hyperbox<F> {
    pub fn new(lower: Vec<F>, upper: Vec<F>) -> Result<Self> {
        if lower.is_empty() {
            return Err(PartXError::InvalidHyperbox("zero dimensions".into()));
        }
        if lower.len() != upper.len() {
            return Err(PartXError::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        for (l, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(*lo < *hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(PartXError::InvalidHyperbox(format!(
                    "bounds in dimension {l} must satisfy lower < upper and be finite"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Unit cube [0,1]^d.
    pub fn unit(dim: usize) -> Self {
        Self::new(vec![F::zero(); dim], vec![F::one(); dim]).expect("unit cube is valid")
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[F] {
        &self.lower
    }

    pub fn upper(&self) -> &[F] {
        &self.upper
    }

    pub fn side(&self, dim: usize) -> F {
        self.upper[dim] - self.lower[dim]
    }

    /// Side lengths in every dimension.
    pub fn extents(&self) -> Vec<F> {
        (0..self.dim()).map(|l| self.side(l)).collect()
    }

    pub fn volume(&self) -> F {
        (0..self.dim()).fold(F::one(), |acc, l| acc * self.side(l))
    }

    pub fn center(&self) -> Vec<F> {
        let half = F::of(0.5);
        (0..self.dim())
            .map(|l| self.lower[l] + self.side(l) * half)
            .collect()
    }

    /// Closed-bounds containment test.
    pub fn contains(&self, point: &[F]) -> bool {
        point.len() == self.dim()
            && point
                .iter()
                .enumerate()
                .all(|(l, x)| self.lower[l] <= *x && *x <= self.upper[l])
    }

    /// One point uniformly distributed over the box.
    ///
    /// Underlying draws are always `f64` so every scalar type consumes the
    /// random stream identically.
    pub fn sample_uniform<R: Rng>(&self, rng: &mut R) -> Vec<F> {
        (0..self.dim())
            .map(|l| self.lower[l] + self.side(l) * F::of(rng.random::<f64>()))
            .collect()
    }

    /// Splits the box along `dim` into `pieces` children of equal volume.
    ///
    /// Adjacent children share the exact same cut coordinate, so the children
    /// tile the parent without gaps or overlaps.
    pub fn split(&self, dim: usize, pieces: usize) -> Vec<Self> {
        assert!(pieces >= 2, "split needs at least two pieces");
        assert!(dim < self.dim(), "split dimension out of range");
        let side = self.side(dim);
        let mut cuts = Vec::with_capacity(pieces + 1);
        cuts.push(self.lower[dim]);
        for i in 1..pieces {
            cuts.push(self.lower[dim] + side * F::of_usize(i) / F::of_usize(pieces));
        }
        cuts.push(self.upper[dim]);
        (0..pieces)
            .map(|i| {
                let mut lower = self.lower.clone();
                let mut upper = self.upper.clone();
                lower[dim] = cuts[i];
                upper[dim] = cuts[i + 1];
                Self { lower, upper }
            })
            .collect()
    }

    /// Maps a point into box-relative coordinates in [0,1]^d.
    pub fn normalize(&self, point: &[F]) -> Vec<F> {
        (0..self.dim())
            .map(|l| (point[l] - self.lower[l]) / self.side(l))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_bounds() {
        assert!(Hyperbox::new(vec![0.0], vec![0.0]).is_err());
        assert!(Hyperbox::new(vec![1.0], vec![0.0]).is_err());
        assert!(Hyperbox::new(vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(Hyperbox::<f64>::new(vec![], vec![]).is_err());
        assert!(Hyperbox::new(vec![0.0], vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn volume_and_center() {
        let b = Hyperbox::new(vec![-1.0, 0.0], vec![1.0, 4.0]).unwrap();
        assert_eq!(b.volume(), 8.0);
        assert_eq!(b.center(), vec![0.0, 2.0]);
        assert!(b.contains(&[1.0, 0.0]));
        assert!(!b.contains(&[1.0, 4.5]));
    }

    #[test]
    fn split_into_exact_thirds() {
        let b = Hyperbox::new(vec![0.0], vec![9.0]).unwrap();
        let kids = b.split(0, 3);
        assert_eq!(kids[0].lower()[0], 0.0);
        assert_eq!(kids[0].upper()[0], 3.0);
        assert_eq!(kids[1].lower()[0], 3.0);
        assert_eq!(kids[1].upper()[0], 6.0);
        assert_eq!(kids[2].lower()[0], 6.0);
        assert_eq!(kids[2].upper()[0], 9.0);
    }

    #[test]
    fn split_bisects_unit_square() {
        let b = Hyperbox::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let kids = b.split(0, 2);
        assert_eq!(kids.len(), 2);
        assert_eq!(kids[0].upper(), &[0.5, 1.0]);
        assert_eq!(kids[1].lower(), &[0.5, 0.0]);
        let total: f64 = kids.iter().map(|k| k.volume()).sum();
        assert_eq!(total, b.volume());
    }

    #[test]
    fn uniform_samples_stay_inside() {
        use rand::SeedableRng;
        let b = Hyperbox::new(vec![-2.0, 3.0], vec![-1.0, 10.0]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            assert!(b.contains(&b.sample_uniform(&mut rng)));
        }
    }
}
