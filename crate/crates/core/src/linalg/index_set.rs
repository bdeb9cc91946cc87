use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A subset of `{0, .., 31}` stored as a bitmask.
///
/// Iteration is always in increasing index order.
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(u32);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        IndexSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 32);
        if n == 32 {
            IndexSet(u32::MAX)
        } else {
            IndexSet((1u32 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        IndexSet(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices.into_iter().fold(IndexSet::EMPTY, |s, i| s.with(i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn with(self, i: usize) -> Self {
        IndexSet(self.0 | (1 << i))
    }

    pub fn without(self, i: usize) -> Self {
        IndexSet(self.0 & !(1 << i))
    }

    pub fn union(self, other: Self) -> Self {
        IndexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        IndexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        IndexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Largest element plus one, or 0 for the empty set.
    pub fn span(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> + Clone {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Position of `i` among the elements of `self`.
    pub fn rank_of(self, i: usize) -> Option<usize> {
        if !self.contains(i) {
            return None;
        }
        Some((self.0 & ((1u32 << i) - 1)).count_ones() as usize)
    }

    /// All subsets of `self`, in increasing bitmask order (starting with the
    /// empty set).
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }

    /// The `k`-element subsets of `self` in lexicographic order of their
    /// sorted index tuples.
    pub fn subsets_of_len(self, k: usize) -> Vec<IndexSet> {
        fn rec(elems: &[usize], k: usize, start: usize, acc: IndexSet, out: &mut Vec<IndexSet>) {
            if k == 0 {
                out.push(acc);
                return;
            }
            for p in start..=elems.len() - k {
                rec(elems, k - 1, p + 1, acc.with(elems[p]), out);
            }
        }
        let elems = self.to_vec();
        let mut out = Vec::new();
        if k <= elems.len() {
            rec(&elems, k, 0, IndexSet::EMPTY, &mut out);
        }
        out
    }

    /// 1-based indices, the form used in reports.
    pub fn to_one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }
}

/// Iterator over the subsets of a mask (see [`IndexSet::subsets`]).
#[derive(Clone, Debug)]
pub struct Subsets {
    mask: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = IndexSet;

    fn next(&mut self) -> Option<IndexSet> {
        let cur = self.next?;
        // standard submask walk in increasing order
        self.next = if cur == self.mask {
            None
        } else {
            Some((cur.wrapping_sub(self.mask)) & self.mask)
        };
        Some(IndexSet(cur))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (pos, i) in self.iter().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_one_based().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(deserializer)?;
        let mut set = IndexSet::EMPTY;
        for i in v {
            if i == 0 || i > 32 {
                return Err(serde::de::Error::custom(format!("index {i} out of range 1..=32")));
            }
            set = set.with(i - 1);
        }
        Ok(set)
    }
}
