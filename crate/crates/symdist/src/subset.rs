//! Subset references and deterministic family enumeration.
//!
//! A subset of `[1, n]` is held either as a dense bitmask (bit `i-1` set
//! means index `i` is present; only when every index fits in a machine word)
//! or as a strictly increasing index list. Equality, ordering and hashing go
//! through the abstract index sequence, so the two representations compare
//! interchangeably.
//!
//! The canonical enumeration order everywhere in this crate is
//! size-then-lex: subsets are listed by increasing cardinality, and within a
//! cardinality by lexicographic order of the increasing index list. Witness
//! pairs reported by the verifier are minimal in the induced pair order, so
//! re-running with different thread counts cannot change reported output.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

/// Reference to a subset of `[1, n]`, with 1-based indices.
#[derive(Clone, Debug)]
pub enum SubsetRef {
    /// Dense bitmask; bit `i-1` represents index `i`. Valid for indices <= 64.
    Bits(u64),
    /// Strictly increasing list of 1-based indices. Used when `n > 64`.
    Set(Vec<u32>),
}

impl SubsetRef {
    pub fn empty() -> Self {
        SubsetRef::Bits(0)
    }

    /// Builds from a strictly increasing index slice, choosing the dense
    /// representation when every index fits.
    pub fn from_sorted(indices: &[u32]) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        if indices.last().is_none_or(|&last| last <= 64) {
            let mut bits = 0u64;
            for &i in indices {
                bits |= 1u64 << (i - 1);
            }
            SubsetRef::Bits(bits)
        } else {
            SubsetRef::Set(indices.to_vec())
        }
    }

    pub fn len(&self) -> u32 {
        match self {
            SubsetRef::Bits(b) => b.count_ones(),
            SubsetRef::Set(v) => v.len() as u32,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, index: u32) -> bool {
        match self {
            SubsetRef::Bits(b) => (1..=64).contains(&index) && (b >> (index - 1)) & 1 == 1,
            SubsetRef::Set(v) => v.binary_search(&index).is_ok(),
        }
    }

    /// Increasing index list, 1-based.
    pub fn to_indices(&self) -> Vec<u32> {
        match self {
            SubsetRef::Bits(b) => {
                let mut v = Vec::with_capacity(b.count_ones() as usize);
                let mut rest = *b;
                while rest != 0 {
                    let tz = rest.trailing_zeros();
                    v.push(tz + 1);
                    rest &= rest - 1;
                }
                v
            }
            SubsetRef::Set(v) => v.clone(),
        }
    }

    /// Compact display form `{i1,i2,...}`.
    pub fn display(&self) -> String {
        let idx = self.to_indices();
        let inner: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        format!("{{{}}}", inner.join(","))
    }

    fn cmp_lex(&self, other: &Self) -> Ordering {
        match (self, other) {
            (SubsetRef::Bits(a), SubsetRef::Bits(b)) => {
                // Walk both masks from the lowest set bit upward; the first
                // position where the smaller index diverges decides.
                let (mut x, mut y) = (*a, *b);
                while x != 0 && y != 0 {
                    let i = x.trailing_zeros();
                    let j = y.trailing_zeros();
                    match i.cmp(&j) {
                        Ordering::Equal => {
                            x &= x - 1;
                            y &= y - 1;
                        }
                        ord => return ord,
                    }
                }
                x.count_ones().cmp(&y.count_ones())
            }
            _ => {
                let a = self.to_indices();
                let b = other.to_indices();
                a.cmp(&b)
            }
        }
    }
}

impl PartialEq for SubsetRef {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for SubsetRef {}

/// Size-then-lex order.
impl Ord for SubsetRef {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.cmp_lex(other))
    }
}

impl PartialOrd for SubsetRef {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for SubsetRef {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            SubsetRef::Bits(b) => {
                let mut rest = *b;
                while rest != 0 {
                    (rest.trailing_zeros() + 1).hash(state);
                    rest &= rest - 1;
                }
            }
            SubsetRef::Set(v) => {
                for i in v {
                    i.hash(state);
                }
            }
        }
    }
}

/// Iterator over all subsets of `[1, n]` with sizes in `[lo, hi]`, in
/// size-then-lex order. Sizes outside `0..=n` are clamped away.
pub struct SubsetIter {
    n: u32,
    hi: u32,
    size: u32,
    /// Current combination (1-based, strictly increasing); empty before the
    /// first `advance` at each size.
    comb: Vec<u32>,
    started: bool,
    done: bool,
}

impl SubsetIter {
    pub fn new(n: u32, lo: u32, hi: u32) -> Self {
        let hi = hi.min(n);
        let done = lo > hi;
        SubsetIter {
            n,
            hi,
            size: lo,
            comb: Vec::new(),
            started: false,
            done,
        }
    }

    fn first_of_size(&mut self) {
        self.comb = (1..=self.size).collect();
        self.started = true;
    }

    /// Standard next-combination step; returns false when the current size
    /// is exhausted.
    fn advance(&mut self) -> bool {
        let s = self.size as usize;
        if s == 0 {
            return false;
        }
        let mut i = s;
        while i > 0 {
            i -= 1;
            if self.comb[i] < self.n - (s - 1 - i) as u32 {
                self.comb[i] += 1;
                for j in i + 1..s {
                    self.comb[j] = self.comb[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for SubsetIter {
    type Item = SubsetRef;

    fn next(&mut self) -> Option<SubsetRef> {
        if self.done {
            return None;
        }
        if !self.started {
            self.first_of_size();
            return Some(SubsetRef::from_sorted(&self.comb));
        }
        if self.advance() {
            return Some(SubsetRef::from_sorted(&self.comb));
        }
        // Current size exhausted; move to the next one.
        if self.size >= self.hi {
            self.done = true;
            return None;
        }
        self.size += 1;
        self.first_of_size();
        Some(SubsetRef::from_sorted(&self.comb))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_order_and_count() {
        let all: Vec<SubsetRef> = SubsetIter::new(4, 1, 4).collect();
        assert_eq!(all.len(), 15);
        // size-then-lex: singletons first, then pairs starting {1,2}
        assert_eq!(all[0].to_indices(), vec![1]);
        assert_eq!(all[3].to_indices(), vec![4]);
        assert_eq!(all[4].to_indices(), vec![1, 2]);
        assert_eq!(all[5].to_indices(), vec![1, 3]);
        assert_eq!(all[14].to_indices(), vec![1, 2, 3, 4]);
        // strictly ascending in the canonical order
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumeration_respects_cap() {
        let capped: Vec<SubsetRef> = SubsetIter::new(4, 1, 2).collect();
        assert_eq!(capped.len(), 10);
        let with_empty: Vec<SubsetRef> = SubsetIter::new(4, 0, 2).collect();
        assert_eq!(with_empty.len(), 11);
        assert!(with_empty[0].is_empty());
        let degenerate: Vec<SubsetRef> = SubsetIter::new(3, 2, 1).collect();
        assert!(degenerate.is_empty());
    }

    #[test]
    fn order_agrees_across_representations() {
        let a = SubsetRef::from_sorted(&[1, 4]);
        let b = SubsetRef::Set(vec![1, 4]);
        assert_eq!(a, b);
        assert_eq!(a.cmp(&b), Ordering::Equal);
        let c = SubsetRef::from_sorted(&[2, 3]);
        // {1,4} < {2,3} lexicographically despite larger mask value
        assert!(a < c);
        let d = SubsetRef::from_sorted(&[5]);
        assert!(d < a); // smaller size wins
    }

    #[test]
    fn large_index_representation() {
        let s = SubsetRef::from_sorted(&[1, 65, 100]);
        assert!(matches!(s, SubsetRef::Set(_)));
        assert!(s.contains(65));
        assert!(!s.contains(2));
        assert_eq!(s.len(), 3);
    }
}
