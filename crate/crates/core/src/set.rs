//! Fixed-capacity vertex sets.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;

/// A subset of `0..capacity`, stored as a bitset.
///
/// Equality and hashing are by contents. The `Ord` impl is the
/// lexicographic order of the sorted member lists, which is the tie-break
/// order used everywhere a choice between equal-weight solutions is made.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(FixedBitSet);

impl VertexSet {
    pub fn new(capacity: usize) -> Self {
        VertexSet(FixedBitSet::with_capacity(capacity))
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = FixedBitSet::with_capacity(capacity);
        s.insert_range(..);
        VertexSet(s)
    }

    pub fn from_iter_with_capacity<I: IntoIterator<Item = usize>>(capacity: usize, items: I) -> Self {
        let mut s = Self::new(capacity);
        for v in items {
            s.insert(v);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(v)
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0.insert(v);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0.set(v, false);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.minimum()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.0.difference_with(&other.0);
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    /// Complement within `0..capacity`.
    pub fn complement(&self) -> VertexSet {
        let mut s = self.0.clone();
        s.toggle_range(..);
        VertexSet(s)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.0.intersection_count(&other.0)
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        // The smallest element of the symmetric difference decides: the list
        // holding it is smaller unless the other list stops before it.
        let first_diff = first_difference(self.0.as_slice(), other.0.as_slice());
        match first_diff {
            None => Ordering::Equal,
            Some(d) => {
                let self_has = self.contains(d);
                let lacking = if self_has { other } else { self };
                let lacking_continues = lacking.0.ones().any(|v| v > d);
                match (self_has, lacking_continues) {
                    (true, true) | (false, false) => Ordering::Less,
                    _ => Ordering::Greater,
                }
            }
        }
    }
}

fn first_difference(a: &[usize], b: &[usize]) -> Option<usize> {
    let len = a.len().max(b.len());
    (0..len).find_map(|i| {
        let x = a.get(i).copied().unwrap_or(0) ^ b.get(i).copied().unwrap_or(0);
        (x != 0).then(|| i * usize::BITS as usize + x.trailing_zeros() as usize)
    })
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(items: &[usize]) -> VertexSet {
        VertexSet::from_iter_with_capacity(16, items.iter().copied())
    }

    #[test]
    fn lexicographic_order() {
        assert!(set(&[0, 1]) < set(&[0, 2]));
        assert!(set(&[0, 2]) < set(&[1]));
        assert!(set(&[0]) < set(&[0, 1]));
        assert!(set(&[]) < set(&[3]));
        assert_eq!(set(&[2, 5]).cmp(&set(&[2, 5])), Ordering::Equal);
    }

    #[test]
    fn complement_respects_capacity() {
        let s = VertexSet::from_iter_with_capacity(5, [1, 3]);
        assert_eq!(s.complement().to_vec(), vec![0, 2, 4]);
        assert_eq!(VertexSet::full(3).to_vec(), vec![0, 1, 2]);
    }

    proptest! {
        #[test]
        fn order_matches_sorted_lists(a in proptest::collection::btree_set(0usize..12, 0..8),
                                      b in proptest::collection::btree_set(0usize..12, 0..8)) {
            let va: Vec<usize> = a.iter().copied().collect();
            let vb: Vec<usize> = b.iter().copied().collect();
            let sa = VertexSet::from_iter_with_capacity(12, va.clone());
            let sb = VertexSet::from_iter_with_capacity(12, vb.clone());
            prop_assert_eq!(sa.cmp(&sb), va.cmp(&vb));
        }
    }
}
