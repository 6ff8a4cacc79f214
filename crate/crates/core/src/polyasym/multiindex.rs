use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::math;

/// Largest number of variables supported by [`IndexSubset`].
pub const MAX_VARIABLES: usize = 16;

/// An element of `N_0^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self(alloc::vec![0; n])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|alpha| = alpha_1 + ... + alpha_n`.
    pub fn modulus(&self) -> u64 {
        self.0.iter().map(|&a| a as u64).sum()
    }

    /// `alpha! = alpha_1! ... alpha_n!`.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| math::factorial(a)).product()
    }

    /// Componentwise order; `None` when the lengths differ.
    pub fn le(&self, other: &Self) -> Option<bool> {
        (self.len() == other.len()).then(|| self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    /// The components indexed by `subset`, in increasing index order.
    pub fn restrict(&self, subset: &IndexSubset) -> Result<Self> {
        if subset.n() != self.len() {
            return Err(Error::Invalid(alloc::format!(
                "subset of {{1..{}}} applied to a multi-index of length {}",
                subset.n(),
                self.len()
            )));
        }
        Ok(Self(
            subset.indices().into_iter().map(|j| self.0[j]).collect(),
        ))
    }

    /// All `beta <= self` componentwise, in lexicographic order.
    pub fn box_below(&self) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = alloc::vec![0u32; self.len()];
        loop {
            out.push(Self(cur.clone()));
            let mut k = self.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur[k] < self.0[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = 0;
            }
        }
    }

    /// All multi-indices of length `n` with `|alpha| = order`.
    pub fn of_modulus(n: usize, order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = alloc::vec![0u32; n];
        fn rec(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if k + 1 == cur.len() {
                cur[k] = left;
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for v in (0..=left).rev() {
                cur[k] = v;
                rec(k + 1, left - v, cur, out);
            }
        }
        if n > 0 {
            rec(0, order, &mut cur, &mut out);
        }
        out
    }

    /// All multi-indices of length `n` with `|alpha| <= depth`.
    pub fn up_to_modulus(n: usize, depth: u32) -> Vec<MultiIndex> {
        (0..=depth).flat_map(|d| Self::of_modulus(n, d)).collect()
    }

    /// Multi-index over `a ∪ b` assembled from parts over the disjoint sets `a` and `b`.
    pub fn merge(a: &IndexSubset, alpha_a: &Self, b: &IndexSubset, alpha_b: &Self) -> Result<Self> {
        let u = a.union(b)?;
        let (ia, ib) = (a.indices(), b.indices());
        Ok(Self(
            u.indices()
                .into_iter()
                .map(|j| match ia.iter().position(|&x| x == j) {
                    Some(k) => alpha_a.0[k],
                    None => alpha_b.0[ib.iter().position(|&x| x == j).expect("index in union")],
                })
                .collect(),
        ))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// A nonempty subset `J` of `{0, ..., n-1}` stored as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSubset {
    n: u8,
    mask: u32,
}

impl IndexSubset {
    pub fn new(n: usize, mask: u32) -> Result<Self> {
        if n == 0 || n > MAX_VARIABLES {
            return Err(Error::Invalid(alloc::format!(
                "number of variables {n} outside 1..={MAX_VARIABLES}"
            )));
        }
        if mask == 0 || mask >> n != 0 {
            return Err(Error::Invalid(alloc::format!(
                "mask {mask:#b} is not a nonempty subset of {n} indices"
            )));
        }
        Ok(Self { n: n as u8, mask })
    }

    /// From zero-based indices.
    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &j in indices {
            if j >= n {
                return Err(Error::Invalid(alloc::format!("index {j} outside 0..{n}")));
            }
            mask |= 1 << j;
        }
        Self::new(n, mask)
    }

    pub fn singleton(n: usize, j: usize) -> Result<Self> {
        Self::from_indices(n, &[j])
    }

    pub fn full(n: usize) -> Result<Self> {
        Self::new(n, if n >= 32 { u32::MAX } else { (1u32 << n) - 1 })
    }

    /// Every nonempty subset of `{0, ..., n-1}`, ordered by mask.
    pub fn all(n: usize) -> Result<Vec<Self>> {
        Self::full(n)?;
        Ok((1..(1u32 << n))
            .map(|mask| Self { n: n as u8, mask })
            .collect())
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n()
    }

    pub fn contains(&self, j: usize) -> bool {
        j < self.n() && self.mask & (1 << j) != 0
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.contains(j)).collect()
    }

    /// Indices of the complement `J'`, possibly empty.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&j| !self.contains(j)).collect()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.mask & other.mask == 0
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Invalid("subsets of different index sets".into()));
        }
        Self::new(self.n(), self.mask | other.mask)
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, j) in self.indices().into_iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", j + 1)?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn basic_quantities() {
        let a = MultiIndex::new(vec![2, 0, 3]);
        assert_eq!(a.modulus(), 5);
        assert_eq!(a.factorial(), 12.0);
        assert_eq!(a.le(&MultiIndex::new(vec![2, 1, 3])), Some(true));
        assert_eq!(a.le(&MultiIndex::new(vec![1, 1, 3])), Some(false));
        assert_eq!(a.le(&MultiIndex::new(vec![1])), None);
        let j = IndexSubset::from_indices(3, &[0, 2]).unwrap();
        assert_eq!(a.restrict(&j).unwrap(), MultiIndex::new(vec![2, 3]));
        assert_eq!(alloc::format!("{j} {a}"), "{1,3} (2,0,3)");
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(MultiIndex::new(vec![1, 2]).box_below().len(), 6);
        assert_eq!(MultiIndex::of_modulus(3, 2).len(), 6);
        assert_eq!(MultiIndex::up_to_modulus(2, 3).len(), 10);
        assert_eq!(IndexSubset::all(3).unwrap().len(), 7);
    }

    #[test]
    fn subsets() {
        assert!(IndexSubset::new(2, 0).is_err());
        assert!(IndexSubset::new(2, 4).is_err());
        let j = IndexSubset::singleton(3, 1).unwrap();
        assert_eq!(j.complement_indices(), vec![0, 2]);
        assert!(IndexSubset::full(3).unwrap().is_full());
        let l = IndexSubset::singleton(3, 2).unwrap();
        assert!(j.is_disjoint(&l));
        let m = MultiIndex::merge(&l, &MultiIndex::new(vec![5]), &j, &MultiIndex::new(vec![7]))
            .unwrap();
        assert_eq!(m, MultiIndex::new(vec![7, 5]));
    }
}
