use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest supported vertex universe.
pub const MAX_UNIVERSE: usize = 24;

/// A set of vertices encoded as bits of a machine word; bit `i` is vertex `i`
/// of whatever universe the set lives in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VSet(pub u32);

impl VSet {
    pub const EMPTY: VSet = VSet(0);

    /// All of `0..n`.
    #[inline]
    pub fn full(n: usize) -> VSet {
        debug_assert!(n <= 32);
        if n >= 32 {
            VSet(u32::MAX)
        } else {
            VSet((1u32 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(v: usize) -> VSet {
        VSet(1 << v)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> VSet {
        VSet(it.into_iter().fold(0, |acc, v| acc | (1 << v)))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn insert(self, v: usize) -> VSet {
        VSet(self.0 | (1 << v))
    }

    #[inline]
    pub fn remove(self, v: usize) -> VSet {
        VSet(self.0 & !(1 << v))
    }

    #[inline]
    pub fn union(self, o: VSet) -> VSet {
        VSet(self.0 | o.0)
    }

    #[inline]
    pub fn intersection(self, o: VSet) -> VSet {
        VSet(self.0 & o.0)
    }

    #[inline]
    pub fn difference(self, o: VSet) -> VSet {
        VSet(self.0 & !o.0)
    }

    #[inline]
    pub fn is_subset(self, o: VSet) -> bool {
        self.0 & !o.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, o: VSet) -> bool {
        self.0 & o.0 == 0
    }

    /// Complement inside the universe `0..n`.
    #[inline]
    pub fn complement(self, n: usize) -> VSet {
        VSet::full(n).difference(self)
    }

    pub fn iter(self) -> VSetIter {
        VSetIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Smallest element, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Every subset of `self`, in increasing numeric order (so every subset is
    /// visited before any of its supersets).
    pub fn subsets(self) -> impl Iterator<Item = VSet> {
        let mask = self.0;
        let mut cur: Option<u32> = Some(0);
        std::iter::from_fn(move || {
            let out = cur?;
            cur = if out == mask { None } else { Some((out.wrapping_sub(mask)) & mask) };
            Some(VSet(out))
        })
    }

    /// Sort key for "increasing cardinality, then lexicographic on the sorted
    /// vertex list".
    pub fn card_lex_key(self) -> (usize, Vec<usize>) {
        (self.len(), self.to_vec())
    }
}

pub struct VSetIter(u32);

impl Iterator for VSetIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl FromIterator<usize> for VSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VSet::from_indices(iter)
    }
}

impl fmt::Debug for VSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}
