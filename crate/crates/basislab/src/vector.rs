//! Coordinate vectors over the scalar field.
//!
//! A `CoordVector` of dimension n stands for the finitely supported sequence
//! (a_1, ..., a_n, 0, 0, ...). Trailing zeros are significant for the
//! bounded-variation norm, which charges the final drop to zero.

use crate::scalar::{Rat, Scalar};
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq)]
pub struct CoordVector {
    coeffs: Vec<Scalar>,
}

impl CoordVector {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty(), "dimension must be positive");
        CoordVector { coeffs }
    }

    pub fn from_rats(coeffs: Vec<Rat>) -> Self {
        Self::new(coeffs.into_iter().map(Scalar::Exact).collect())
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn from_f64s(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Scalar::Float(c)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Scalar::zero(); dim])
    }

    /// Standard unit vector e_i (1-based index).
    pub fn unit(dim: usize, i: usize) -> Self {
        assert!((1..=dim).contains(&i));
        let mut v = vec![Scalar::zero(); dim];
        v[i - 1] = Scalar::one();
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// All coordinates as exact rationals, if the vector is fully exact.
    pub fn as_exact(&self) -> Option<Vec<Rat>> {
        self.coeffs
            .iter()
            .map(|c| c.as_exact().cloned())
            .collect()
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64()).collect()
    }

    /// 1-based support: indices with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &CoordVector) -> CoordVector {
        assert_eq!(self.dim(), other.dim());
        CoordVector::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &CoordVector) -> CoordVector {
        assert_eq!(self.dim(), other.dim());
        CoordVector::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, by: &Scalar) -> CoordVector {
        CoordVector::new(self.coeffs.iter().map(|c| c * by).collect())
    }

    pub fn dot(&self, other: &CoordVector) -> Scalar {
        assert_eq!(self.dim(), other.dim());
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
    }
}

/// Exact dot product over rational slices.
pub fn dot_exact(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}
