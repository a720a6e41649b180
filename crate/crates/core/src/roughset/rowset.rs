use alloc::vec::Vec;
use core::fmt;

use fixedbitset::FixedBitSet;

/// A subset of the rows of a decision table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RowSet {
    bits: FixedBitSet,
}

impl RowSet {
    pub fn empty(universe: usize) -> Self {
        RowSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        RowSet { bits }
    }

    pub fn from_rows(universe: usize, rows: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(universe);
        for r in rows {
            set.insert(r);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, row: usize) {
        self.bits.insert(row);
    }

    pub fn contains(&self, row: usize) -> bool {
        self.bits.contains(row)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_subset(&self, other: &RowSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersects(&self, other: &RowSet) -> bool {
        !self.bits.is_disjoint(&other.bits)
    }

    pub fn intersection_len(&self, other: &RowSet) -> usize {
        self.bits.intersection_count(&other.bits)
    }

    pub fn intersect_with(&mut self, other: &RowSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn union_with(&mut self, other: &RowSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &RowSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn intersection(&self, other: &RowSet) -> RowSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &RowSet) -> RowSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for RowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
