//! Fixed-capacity bit sets over `0..capacity`.
//!
//! The adjacency rows of [`crate::graph::Graph`], color classes, and vertex
//! subsets throughout the crate are all `BitSet`s. Capacity is fixed at
//! construction; all binary operations require equal capacities.

use alloc::vec;
use alloc::vec::Vec;

/// A set of `usize` values drawn from `0..capacity`, stored as packed words.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitSet {
    nbits: usize,
    words: Vec<u64>,
}

impl BitSet {
    /// Creates an empty set with room for values `0..nbits`.
    pub fn new(nbits: usize) -> Self {
        BitSet {
            nbits,
            words: vec![0; nbits.div_ceil(64)],
        }
    }

    /// Creates a set containing every value in `0..nbits`.
    pub fn full(nbits: usize) -> Self {
        let mut s = BitSet::new(nbits);
        for w in s.words.iter_mut() {
            *w = !0;
        }
        s.trim();
        s
    }

    /// Collects the given values into a set with capacity `nbits`.
    ///
    /// Panics if a value is out of range.
    pub fn from_iter<I: IntoIterator<Item = usize>>(nbits: usize, vals: I) -> Self {
        let mut s = BitSet::new(nbits);
        for v in vals {
            s.insert(v);
        }
        s
    }

    /// Number of values this set can hold (`0..capacity`).
    pub fn capacity(&self) -> usize {
        self.nbits
    }

    /// Number of elements currently in the set.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True if the set has no elements.
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// True if `v` is in the set.
    pub fn contains(&self, v: usize) -> bool {
        debug_assert!(v < self.nbits, "value {v} out of range {}", self.nbits);
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    /// Inserts `v`. Panics if out of range.
    pub fn insert(&mut self, v: usize) {
        assert!(v < self.nbits, "value {v} out of range {}", self.nbits);
        self.words[v / 64] |= 1 << (v % 64);
    }

    /// Removes `v` if present.
    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < self.nbits);
        self.words[v / 64] &= !(1 << (v % 64));
    }

    /// Flips membership of `v`.
    pub fn toggle(&mut self, v: usize) {
        assert!(v < self.nbits, "value {v} out of range {}", self.nbits);
        self.words[v / 64] ^= 1 << (v % 64);
    }

    /// Removes all elements.
    pub fn clear(&mut self) {
        for w in self.words.iter_mut() {
            *w = 0;
        }
    }

    /// In-place union. Panics on capacity mismatch.
    pub fn union_with(&mut self, other: &BitSet) {
        assert_eq!(self.nbits, other.nbits, "capacity mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// In-place intersection. Panics on capacity mismatch.
    pub fn intersect_with(&mut self, other: &BitSet) {
        assert_eq!(self.nbits, other.nbits, "capacity mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// In-place difference (`self \ other`). Panics on capacity mismatch.
    pub fn difference_with(&mut self, other: &BitSet) {
        assert_eq!(self.nbits, other.nbits, "capacity mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// In-place symmetric difference. Panics on capacity mismatch.
    pub fn xor_with(&mut self, other: &BitSet) {
        assert_eq!(self.nbits, other.nbits, "capacity mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// True if every element of `self` is in `other`.
    pub fn is_subset(&self, other: &BitSet) -> bool {
        assert_eq!(self.nbits, other.nbits, "capacity mismatch");
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// True if the two sets share no element.
    pub fn is_disjoint(&self, other: &BitSet) -> bool {
        assert_eq!(self.nbits, other.nbits, "capacity mismatch");
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Smallest element, if any.
    pub fn first(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Iterates over elements in increasing order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            set: self,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Elements in increasing order as a vector.
    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    // Clears any bits beyond `nbits` (needed after whole-word fills).
    fn trim(&mut self) {
        let rem = self.nbits % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl core::fmt::Debug for BitSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterator over set elements in increasing order.
pub struct Iter<'a> {
    set: &'a BitSet,
    word_idx: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_idx * 64 + bit);
            }
            self.word_idx += 1;
            if self.word_idx >= self.set.words.len() {
                return None;
            }
            self.current = self.set.words[self.word_idx];
        }
    }
}

impl<'a> IntoIterator for &'a BitSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn insert_contains_remove() {
        let mut s = BitSet::new(130);
        assert!(s.is_empty());
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.len(), 3);
        assert!(s.contains(64));
        assert!(!s.contains(63));
        s.remove(64);
        assert!(!s.contains(64));
        assert_eq!(s.to_vec(), vec![0, 129]);
    }

    #[test]
    fn full_respects_capacity() {
        for n in [0, 1, 63, 64, 65, 128, 130] {
            let s = BitSet::full(n);
            assert_eq!(s.len(), n, "full({n})");
            assert_eq!(s.to_vec(), (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn set_algebra_matches_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
        for _ in 0..200 {
            let n = rng.gen_range(1..100);
            let a_v: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
            let b_v: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
            let a = BitSet::from_iter(n, a_v.iter().copied());
            let b = BitSet::from_iter(n, b_v.iter().copied());

            let mut u = a.clone();
            u.union_with(&b);
            let mut i = a.clone();
            i.intersect_with(&b);
            let mut d = a.clone();
            d.difference_with(&b);
            let mut x = a.clone();
            x.xor_with(&b);

            for v in 0..n {
                let ina = a.contains(v);
                let inb = b.contains(v);
                assert_eq!(u.contains(v), ina || inb);
                assert_eq!(i.contains(v), ina && inb);
                assert_eq!(d.contains(v), ina && !inb);
                assert_eq!(x.contains(v), ina != inb);
            }
            assert!(a.is_subset(&u));
            assert!(i.is_subset(&a) && i.is_subset(&b));
            assert!(d.is_disjoint(&b));
        }
    }

    #[test]
    fn iter_is_sorted_and_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF01);
        for _ in 0..50 {
            let n = rng.gen_range(1..200);
            let vals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
            let s = BitSet::from_iter(n, vals.iter().copied());
            assert_eq!(s.to_vec(), vals);
            assert_eq!(s.first(), vals.first().copied());
            assert_eq!(s.len(), vals.len());
        }
    }
}
