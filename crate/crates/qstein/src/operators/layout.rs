//! Tensor-factor layouts and multi-index arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::QsteinError;
use crate::tolerances;
use crate::Result;

/// Ordered list of local dimensions of a tensor-product space.
///
/// The first factor is the most significant index: a basis vector
/// `|i_1 … i_n⟩` has flat index `i_1·d_2·…·d_n + … + i_n`, matching the
/// Kronecker-product convention `A ⊗ B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimLayout {
    factors: Vec<usize>,
}

impl DimLayout {
    /// Layout with the given local dimensions. Fails on empty or zero factors
    /// or when the total dimension exceeds the budget.
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() || factors.iter().any(|&d| d == 0) {
            return Err(QsteinError::ShapeMismatch(
                "layout needs at least one nonzero factor".into(),
            ));
        }
        let total: usize = factors.iter().product();
        if total > tolerances::DEFAULT.dim_cap {
            return Err(QsteinError::BudgetExceeded {
                requested: total,
                cap: tolerances::DEFAULT.dim_cap,
            });
        }
        Ok(Self { factors })
    }

    /// Single-factor layout of dimension `d`.
    pub fn single(d: usize) -> Result<Self> {
        Self::new(vec![d])
    }

    /// `n` identical factors of local dimension `d`.
    pub fn uniform(d: usize, n: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().product()
    }

    /// Layout of this space tensored with `other` (factors concatenated).
    pub fn tensor(&self, other: &DimLayout) -> Result<DimLayout> {
        let mut f = self.factors.clone();
        f.extend_from_slice(&other.factors);
        DimLayout::new(f)
    }

    /// `n`-fold tensor power of this layout.
    pub fn power(&self, n: usize) -> Result<DimLayout> {
        let mut f = Vec::with_capacity(self.factors.len() * n);
        for _ in 0..n {
            f.extend_from_slice(&self.factors);
        }
        DimLayout::new(f)
    }

    /// Layout keeping only the given factor indices, in their original order.
    pub fn keep(&self, keep: &[usize]) -> Result<DimLayout> {
        let mut f = Vec::with_capacity(keep.len());
        for &k in keep {
            if k >= self.factors.len() {
                return Err(QsteinError::InvalidFactor {
                    index: k,
                    factors: self.factors.len(),
                });
            }
            f.push(self.factors[k]);
        }
        DimLayout::new(f)
    }

    pub(crate) fn indexer(&self) -> Indexer {
        Indexer::new(&self.factors)
    }
}

/// Row-major stride table for walking multi-indices of a layout.
#[derive(Debug, Clone)]
pub(crate) struct Indexer {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl Indexer {
    pub fn new(dims: &[usize]) -> Self {
        let mut strides = vec![1usize; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        let total = dims.iter().product();
        Self {
            dims: dims.to_vec(),
            strides,
            total,
        }
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// Decompose a flat index into per-factor digits.
    pub fn unpack(&self, mut flat: usize, out: &mut [usize]) {
        for k in 0..self.dims.len() {
            out[k] = flat / self.strides[k];
            flat %= self.strides[k];
        }
    }

    /// Flat index from per-factor digits.
    pub fn pack(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.strides)
            .map(|(&i, &s)| i * s)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_product_and_budget() {
        let l = DimLayout::new(vec![2, 3, 4]).unwrap();
        assert_eq!(l.total_dim(), 24);
        assert_eq!(l.num_factors(), 3);
        assert!(DimLayout::uniform(2, 13).is_err()); // 8192 > 4096
    }

    #[test]
    fn indexer_roundtrip() {
        let ix = Indexer::new(&[2, 3, 2]);
        let mut digits = [0usize; 3];
        for flat in 0..ix.total() {
            ix.unpack(flat, &mut digits);
            assert_eq!(ix.pack(&digits), flat);
        }
        // first factor most significant
        ix.unpack(6, &mut digits);
        assert_eq!(digits, [1, 0, 0]);
    }

    #[test]
    fn keep_subset() {
        let l = DimLayout::new(vec![2, 3, 4]).unwrap();
        assert_eq!(l.keep(&[0, 2]).unwrap().factors(), &[2, 4]);
        assert!(l.keep(&[3]).is_err());
    }
}
