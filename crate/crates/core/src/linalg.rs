//! Dense symmetric linear algebra for the small per-region systems.
//!
//! Training sets stay in the tens-to-hundreds range, so an unblocked
//! Cholesky factorization is all that is needed.

use crate::scalar::Scalar;

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix,
/// stored row-major and densely (upper part zeroed).
#[derive(Debug, Clone)]
pub struct CholeskyFactor<F> {
    n: usize,
    data: Vec<F>,
}

impl<F: Scalar> CholeskyFactor<F> {
    /// Factorizes the row-major symmetric matrix `a` (n x n). Returns `None`
    /// when a pivot is not strictly positive.
    pub fn factorize(a: &[F], n: usize) -> Option<Self> {
        debug_assert_eq!(a.len(), n * n);
        let mut l = vec![F::zero(); n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = a[i * n + j];
                for k in 0..j {
                    sum = sum - l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if !(sum > F::zero()) || !sum.is_finite() {
                        return None;
                    }
                    l[i * n + j] = sum.sqrt();
                } else {
                    l[i * n + j] = sum / l[j * n + j];
                }
            }
        }
        Some(Self { n, data: l })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Solves L z = b in place.
    pub fn solve_lower(&self, b: &mut [F]) {
        let n = self.n;
        for i in 0..n {
            let mut sum = b[i];
            for k in 0..i {
                sum = sum - self.data[i * n + k] * b[k];
            }
            b[i] = sum / self.data[i * n + i];
        }
    }

    /// Solves Lᵀ z = b in place.
    pub fn solve_lower_transposed(&self, b: &mut [F]) {
        let n = self.n;
        for i in (0..n).rev() {
            let mut sum = b[i];
            for k in i + 1..n {
                sum = sum - self.data[k * n + i] * b[k];
            }
            b[i] = sum / self.data[i * n + i];
        }
    }

    /// Solves A x = b where A = L Lᵀ.
    pub fn solve(&self, b: &[F]) -> Vec<F> {
        let mut x = b.to_vec();
        self.solve_lower(&mut x);
        self.solve_lower_transposed(&mut x);
        x
    }

    /// ln det A = 2 Σ ln L_ii.
    pub fn log_det(&self) -> F {
        let two = F::of(2.0);
        (0..self.n).fold(F::zero(), |acc, i| {
            acc + two * self.data[i * self.n + i].ln()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn factorize_solve_2x2() {
        // A = [[4, 2], [2, 3]]
        let a = vec![4.0, 2.0, 2.0, 3.0];
        let chol = CholeskyFactor::factorize(&a, 2).unwrap();
        let x = chol.solve(&[8.0, 7.0]);
        // exact solution (10/8, 12/8)
        assert_abs_diff_eq!(x[0], 1.25, epsilon = 1e-14);
        assert_abs_diff_eq!(x[1], 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(chol.log_det(), (4.0f64 * 3.0 - 4.0).ln(), epsilon = 1e-14);
    }

    #[test]
    fn rejects_indefinite_matrix() {
        let a = vec![1.0, 2.0, 2.0, 1.0];
        assert!(CholeskyFactor::factorize(&a, 2).is_none());
        let b = vec![0.0];
        assert!(CholeskyFactor::factorize(&b, 1).is_none());
    }
}
