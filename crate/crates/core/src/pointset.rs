//! Compact bitsets over point indices of a finite ground set.

use std::fmt;

use serde::{Serialize, Serializer};
use smallvec::SmallVec;

const WORD: usize = 64;

/// A subset of `{0, .., n-1}` stored as a little-endian bitset.
///
/// Trailing zero words are trimmed, so structural equality is set equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct PointSet {
    words: SmallVec<[u64; 2]>,
}

impl PointSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The full set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::new();
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn singleton(i: usize) -> Self {
        let mut s = Self::new();
        s.insert(i);
        s
    }

    /// Builds a set from the low `n` bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        let mut s = Self::new();
        s.words.push(mask);
        s.trim();
        s
    }

    pub fn insert(&mut self, i: usize) {
        let w = i / WORD;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        let w = i / WORD;
        if w < self.words.len() {
            self.words[w] &= !(1 << (i % WORD));
            self.trim();
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words
            .get(i / WORD)
            .is_some_and(|w| w & (1 << (i % WORD)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// The unique element of a singleton.
    pub fn single(&self) -> Option<usize> {
        if self.len() == 1 {
            self.iter().next()
        } else {
            None
        }
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.words.len() <= other.words.len()
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn is_proper_subset(&self, other: &PointSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn intersects(&self, other: &PointSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut out = PointSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        };
        out.trim();
        out
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = long.clone();
        for (a, b) in out.words.iter_mut().zip(&short.words) {
            *a |= b;
        }
        out
    }

    /// `self \ other`.
    pub fn difference(&self, other: &PointSet) -> PointSet {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        out.trim();
        out
    }

    /// Complement relative to `{0, .., n-1}`.
    pub fn complement(&self, n: usize) -> PointSet {
        PointSet::full(n).difference(self)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    /// Image of the set under a total map given as a table.
    pub fn image(&self, map: &[usize]) -> PointSet {
        self.iter().map(|i| map[i]).collect()
    }

    /// Preimage `{ i < map.len() : map[i] ∈ self }`.
    pub fn preimage(&self, map: &[usize]) -> PointSet {
        (0..map.len()).filter(|&i| self.contains(map[i])).collect()
    }

    /// Ordering key used for deterministic tie-breaking: cardinality first,
    /// then the sorted list of members.
    pub fn tie_key(&self) -> (usize, Vec<usize>) {
        (self.len(), self.iter().collect())
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = PointSet::new();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_ops() {
        let a: PointSet = [0, 2, 70].into_iter().collect();
        let b: PointSet = [2, 70].into_iter().collect();
        assert!(b.is_proper_subset(&a));
        assert_eq!(a.len(), 3);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 2, 70]);
        assert_eq!(a.difference(&b), PointSet::singleton(0));
        assert_eq!(a.intersection(&b), b);
        assert_eq!(PointSet::singleton(5).single(), Some(5));
        let mut c = PointSet::singleton(100);
        c.remove(100);
        assert!(c.is_empty());
        assert_eq!(c, PointSet::new());
    }

    #[test]
    fn image_and_preimage() {
        let map = [1, 1, 2, 0];
        let s: PointSet = [0, 1, 3].into_iter().collect();
        assert_eq!(s.image(&map), [0, 1].into_iter().collect());
        assert_eq!(
            PointSet::singleton(1).preimage(&map),
            [0, 1].into_iter().collect()
        );
    }

    proptest! {
        #[test]
        fn set_algebra_matches_btreeset(a in proptest::collection::btree_set(0usize..150, 0..20),
                                        b in proptest::collection::btree_set(0usize..150, 0..20)) {
            let pa: PointSet = a.iter().copied().collect();
            let pb: PointSet = b.iter().copied().collect();
            let inter: Vec<usize> = a.intersection(&b).copied().collect();
            let uni: Vec<usize> = a.union(&b).copied().collect();
            prop_assert_eq!(pa.intersection(&pb).iter().collect::<Vec<_>>(), inter);
            prop_assert_eq!(pa.union(&pb).iter().collect::<Vec<_>>(), uni);
            prop_assert_eq!(pa.is_subset(&pb), a.is_subset(&b));
            prop_assert_eq!(pa.intersects(&pb), !a.is_disjoint(&b));
        }
    }
}
