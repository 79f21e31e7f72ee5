//! Small-universe element sets.
//!
//! Every ground set in this crate is `[n] = {1, ..., n}` with `n <= 64`;
//! subsets are stored as bitmasks so that oracle queries, transcript
//! comparisons and exhaustive scans stay cheap.

use std::fmt;

use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A ground-set element, identified by its 1-based id.
pub type Element = u32;

/// Largest supported ground-set size.
pub const MAX_GROUND_SET: u32 = 64;

/// A subset of `[n]` for `n <= 64`. Bit `i - 1` is set iff element `i` is in
/// the set. The representation is canonical, so equality and ordering of the
/// raw mask double as set equality and a deterministic total order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    /// The full set `{1, ..., n}`.
    pub fn full(n: u32) -> Self {
        assert!(n <= MAX_GROUND_SET, "ground set larger than {MAX_GROUND_SET}");
        if n == 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(e: Element) -> Self {
        ElemSet::EMPTY.with(e)
    }

    pub fn from_mask(mask: u64) -> Self {
        ElemSet(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn from_elems<I: IntoIterator<Item = Element>>(elems: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for e in elems {
            s.insert(e);
        }
        s
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, e: Element) -> bool {
        debug_assert!((1..=MAX_GROUND_SET).contains(&e));
        self.0 >> (e - 1) & 1 == 1
    }

    pub fn insert(&mut self, e: Element) {
        assert!((1..=MAX_GROUND_SET).contains(&e), "element id out of range: {e}");
        self.0 |= 1u64 << (e - 1);
    }

    pub fn remove(&mut self, e: Element) {
        debug_assert!((1..=MAX_GROUND_SET).contains(&e));
        self.0 &= !(1u64 << (e - 1));
    }

    pub fn with(self, e: Element) -> Self {
        let mut s = self;
        s.insert(e);
        s
    }

    pub fn without(self, e: Element) -> Self {
        let mut s = self;
        s.remove(e);
        s
    }

    pub fn union(self, other: Self) -> Self {
        ElemSet(self.0 | other.0)
    }

    pub fn intersect(self, other: Self) -> Self {
        ElemSet(self.0 & other.0)
    }

    pub fn minus(self, other: Self) -> Self {
        ElemSet(self.0 & !other.0)
    }

    pub fn sym_diff(self, other: Self) -> Self {
        ElemSet(self.0 ^ other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Elements in ascending id order.
    pub fn iter(self) -> ElemIter {
        ElemIter(self.0)
    }

    pub fn to_vec(self) -> Vec<Element> {
        self.iter().collect()
    }

    /// Sum of the element ids, `sum(S)` in the Pi-matroid rule.
    pub fn id_sum(self) -> u64 {
        self.iter().map(u64::from).sum()
    }

    pub fn min_elem(self) -> Option<Element> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() + 1)
        }
    }

    /// All subsets of `[n]`, in ascending mask order.
    pub fn all_subsets(n: u32) -> impl Iterator<Item = ElemSet> {
        let full = ElemSet::full(n).0;
        (0..=full).map(ElemSet)
    }

    /// All strict subsets of `self`, in ascending mask order.
    pub fn strict_subsets(self) -> impl Iterator<Item = ElemSet> {
        let full = self.0;
        // Standard submask walk, reversed to ascend.
        let mut subs = Vec::with_capacity(1 << full.count_ones().min(16));
        let mut m = full;
        loop {
            m = m.wrapping_sub(1) & full;
            if m == full {
                break;
            }
            subs.push(ElemSet(m));
            if m == 0 {
                break;
            }
        }
        subs.sort();
        subs.into_iter()
    }

    /// All `k`-element subsets of `[n]` in lexicographic order of their
    /// sorted id sequences: `{1,2} < {1,3} < ... < {2,3} < ...`.
    pub fn combinations(n: u32, k: u32) -> Combinations {
        let cur = if k > n {
            None
        } else {
            Some((1..=k).collect())
        };
        Combinations { n, k, cur }
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<Element> for ElemSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        ElemSet::from_elems(iter)
    }
}

#[derive(Clone)]
pub struct ElemIter(u64);

impl Iterator for ElemIter {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() + 1;
        self.0 &= self.0 - 1;
        Some(e)
    }
}

/// Lexicographic `k`-combination iterator over `[n]`.
pub struct Combinations {
    n: u32,
    k: u32,
    cur: Option<Vec<Element>>,
}

impl Iterator for Combinations {
    type Item = ElemSet;

    fn next(&mut self) -> Option<ElemSet> {
        let cur = self.cur.as_mut()?;
        let out = ElemSet::from_elems(cur.iter().copied());
        if self.k == 0 {
            self.cur = None;
            return Some(out);
        }
        // Advance to the lexicographic successor.
        let k = self.k as usize;
        let mut i = k;
        while i > 0 {
            i -= 1;
            if cur[i] < self.n - (self.k - 1 - i as u32) {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                return Some(out);
            }
        }
        self.cur = None;
        Some(out)
    }
}

impl Serialize for ElemSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len() as usize))?;
        for e in self.iter() {
            seq.serialize_element(&e)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ElemSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ElemSet;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a sequence of element ids in 1..=64")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<ElemSet, A::Error> {
                let mut s = ElemSet::EMPTY;
                while let Some(e) = seq.next_element::<u64>()? {
                    if !(1..=u64::from(MAX_GROUND_SET)).contains(&e) {
                        return Err(serde::de::Error::custom(format!(
                            "element id {e} out of range 1..=64"
                        )));
                    }
                    s.insert(e as Element);
                }
                Ok(s)
            }
        }
        deserializer.deserialize_seq(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let s = ElemSet::from_elems([2, 3]);
        assert_eq!(s.len(), 2);
        assert_eq!(s.id_sum(), 5);
        assert!(s.contains(2) && s.contains(3) && !s.contains(1));
        assert_eq!(s.to_vec(), vec![2, 3]);
        assert_eq!(format!("{s}"), "{2,3}");
        assert_eq!(ElemSet::EMPTY.id_sum(), 0);
        assert_eq!(ElemSet::full(4).id_sum(), 10);
    }

    #[test]
    fn combinations_lex_order() {
        let got: Vec<_> = ElemSet::combinations(4, 2).collect();
        let want: Vec<ElemSet> = [
            [1, 2],
            [1, 3],
            [1, 4],
            [2, 3],
            [2, 4],
            [3, 4],
        ]
        .iter()
        .map(|p| ElemSet::from_elems(p.iter().copied()))
        .collect();
        assert_eq!(got, want);

        assert_eq!(ElemSet::combinations(3, 0).collect::<Vec<_>>(), vec![ElemSet::EMPTY]);
        assert_eq!(ElemSet::combinations(3, 4).count(), 0);
        assert_eq!(ElemSet::combinations(5, 5).count(), 1);
    }

    #[test]
    fn strict_subsets_of_small_set() {
        let s = ElemSet::from_elems([1, 3]);
        let subs: Vec<_> = s.strict_subsets().collect();
        assert_eq!(
            subs,
            vec![ElemSet::EMPTY, ElemSet::singleton(1), ElemSet::singleton(3)]
        );
    }

    #[test]
    fn serde_roundtrip() {
        let s = ElemSet::from_elems([1, 4, 9]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "[1,4,9]");
        let back: ElemSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<ElemSet>("[0]").is_err());
        assert!(serde_json::from_str::<ElemSet>("[65]").is_err());
    }
}
