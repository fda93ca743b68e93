//! Fixed-width bitsets over arc indices and vertex indices.
//!
//! `ArcSubset` is the object everything else enumerates: a subset of the arc
//! set of one specific digraph, stored as bits over arc indices with the
//! cardinality kept alongside. `VertexSet` plays the same role for vertices.
//! Both are small `Copy` values; nothing here knows about the owning digraph,
//! so index validity is the caller's contract.

use std::fmt;

/// A subset of arc indices, at most [`ArcSubset::MAX_ARCS`] wide.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ArcSubset {
    bits: u128,
    len: u8,
}

impl ArcSubset {
    /// Widest supported arc set.
    pub const MAX_ARCS: usize = 128;

    pub fn empty() -> Self {
        ArcSubset { bits: 0, len: 0 }
    }

    /// The full subset {0, .., n-1}.
    pub fn full(n: usize) -> Self {
        assert!(n <= Self::MAX_ARCS);
        if n == 0 {
            return Self::empty();
        }
        let bits = if n == 128 {
            u128::MAX
        } else {
            (1u128 << n) - 1
        };
        ArcSubset { bits, len: n as u8 }
    }

    pub fn from_bits(bits: u128) -> Self {
        ArcSubset {
            bits,
            len: bits.count_ones() as u8,
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut s = Self::empty();
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn bits(self) -> u128 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, index: usize) -> bool {
        debug_assert!(index < Self::MAX_ARCS);
        self.bits & (1u128 << index) != 0
    }

    pub fn insert(&mut self, index: usize) {
        assert!(index < Self::MAX_ARCS);
        if self.bits & (1u128 << index) == 0 {
            self.bits |= 1u128 << index;
            self.len += 1;
        }
    }

    pub fn remove(&mut self, index: usize) {
        assert!(index < Self::MAX_ARCS);
        if self.bits & (1u128 << index) != 0 {
            self.bits &= !(1u128 << index);
            self.len -= 1;
        }
    }

    pub fn union(self, other: Self) -> Self {
        Self::from_bits(self.bits | other.bits)
    }

    pub fn intersection(self, other: Self) -> Self {
        Self::from_bits(self.bits & other.bits)
    }

    pub fn difference(self, other: Self) -> Self {
        Self::from_bits(self.bits & !other.bits)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.bits & other.bits == 0
    }

    /// Set arc indices in ascending order.
    pub fn iter(self) -> BitIter128 {
        BitIter128 { bits: self.bits }
    }
}

impl fmt::Debug for ArcSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ArcSubset{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

pub struct BitIter128 {
    bits: u128,
}

impl Iterator for BitIter128 {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let i = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(i)
    }
}

/// A subset of vertex indices, at most [`VertexSet::MAX_VERTICES`] wide.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet {
    bits: u64,
}

impl VertexSet {
    pub const MAX_VERTICES: usize = 64;

    pub fn empty() -> Self {
        VertexSet { bits: 0 }
    }

    /// The full vertex set {0, .., n-1}.
    pub fn full(n: usize) -> Self {
        assert!(n <= Self::MAX_VERTICES);
        if n == 0 {
            return Self::empty();
        }
        let bits = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        VertexSet { bits }
    }

    pub fn from_bits(bits: u64) -> Self {
        VertexSet { bits }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut s = Self::empty();
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn singleton(index: usize) -> Self {
        let mut s = Self::empty();
        s.insert(index);
        s
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, index: usize) -> bool {
        debug_assert!(index < Self::MAX_VERTICES);
        self.bits & (1u64 << index) != 0
    }

    pub fn insert(&mut self, index: usize) {
        assert!(index < Self::MAX_VERTICES);
        self.bits |= 1u64 << index;
    }

    pub fn remove(&mut self, index: usize) {
        assert!(index < Self::MAX_VERTICES);
        self.bits &= !(1u64 << index);
    }

    /// Complement within the first `n` vertices.
    pub fn complement(self, n: usize) -> Self {
        let full = Self::full(n);
        VertexSet {
            bits: full.bits & !self.bits,
        }
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet {
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet {
            bits: self.bits & other.bits,
        }
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.bits & other.bits == 0
    }

    pub fn iter(self) -> BitIter64 {
        BitIter64 { bits: self.bits }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexSet{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

pub struct BitIter64 {
    bits: u64,
}

impl Iterator for BitIter64 {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let i = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(i)
    }
}
