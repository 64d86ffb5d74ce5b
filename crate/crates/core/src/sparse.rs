//! Sparse feature vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vector in a fixed-dimension feature space, stored as sorted
/// `(index, value)` pairs. Indices are strictly increasing and below `dim`;
/// explicit zeros are never stored.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SparseVector {
    dim: usize,
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: Vec::new(),
        }
    }

    /// Builds a vector from arbitrary `(index, value)` pairs. Duplicate
    /// indices are summed and zeros dropped.
    pub fn from_pairs(dim: usize, mut pairs: Vec<(usize, f64)>) -> Result<Self> {
        pairs.sort_by_key(|&(i, _)| i);
        let mut entries: Vec<(usize, f64)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            if i >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: i + 1,
                });
            }
            match entries.last_mut() {
                Some((last, acc)) if *last == i => *acc += v,
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|&(_, v)| v != 0.0);
        Ok(Self { dim, entries })
    }

    pub fn from_dense(values: &[f64]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(i, &v)| (i, v))
            .collect();
        Self {
            dim: values.len(),
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }

    pub fn l2_norm(&self) -> f64 {
        self.entries.iter().map(|&(_, v)| v * v).sum::<f64>().sqrt()
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, v)| v * dense[i]).sum()
    }

    /// Multiplies every value by `factor`, dropping entries that become zero.
    pub fn scale(&mut self, factor: f64) {
        for entry in &mut self.entries {
            entry.1 *= factor;
        }
        self.entries.retain(|&(_, v)| v != 0.0);
    }

    /// Appends `other` after this vector: its indices are shifted by
    /// `self.dim()` and the result has dimension `self.dim() + other.dim()`.
    pub fn concat(&self, other: &SparseVector) -> SparseVector {
        let mut entries = Vec::with_capacity(self.nnz() + other.nnz());
        entries.extend_from_slice(&self.entries);
        entries.extend(other.entries.iter().map(|&(i, v)| (i + self.dim, v)));
        SparseVector {
            dim: self.dim + other.dim,
            entries,
        }
    }

    pub(crate) fn from_sorted_unchecked(dim: usize, entries: Vec<(usize, f64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|&(i, v)| i < dim && v != 0.0));
        Self { dim, entries }
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: self.dim,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_pairs_merges_and_sorts() {
        let v = SparseVector::from_pairs(5, vec![(3, 1.0), (1, 2.0), (3, 1.5), (4, 0.0)]).unwrap();
        assert_eq!(v.entries(), &[(1, 2.0), (3, 2.5)]);
        assert!(SparseVector::from_pairs(2, vec![(2, 1.0)]).is_err());
    }

    #[test]
    fn concat_shifts_indices() {
        let a = SparseVector::from_dense(&[1.0, 0.0]);
        let b = SparseVector::from_dense(&[0.0, 3.0]);
        let c = a.concat(&b);
        assert_eq!(c.dim(), 4);
        assert_eq!(c.entries(), &[(0, 1.0), (3, 3.0)]);
    }

    #[test]
    fn get_and_dense() {
        let v = SparseVector::from_dense(&[0.0, 2.0, 0.0, -1.0]);
        assert_eq!(v.get(1), 2.0);
        assert_eq!(v.get(2), 0.0);
        assert_eq!(v.to_dense(), vec![0.0, 2.0, 0.0, -1.0]);
    }
}
