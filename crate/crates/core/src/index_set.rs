//! Sorted index subsets of `[N]` and their poset.
//!
//! An `IndexSet` is the key of every maximal minor and every `T`-variable.
//! It carries its ambient size so the complement, the reversal `σ(i) = N+1-i`
//! and the left-count `η_k` are all well defined.

use crate::error::Error;
use crate::Result;
use std::fmt;

/// A strictly increasing sequence of 1-based indices inside `[1, ambient]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IndexSet {
    ambient: u32,
    elems: Vec<u32>,
}

/// Outcome of a componentwise poset comparison of equal-size index sets.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PosetRel {
    Equal,
    LessEqual,
    GreaterEqual,
    Incomparable,
}

impl IndexSet {
    pub fn new(ambient: u32, elems: Vec<u32>) -> Result<Self> {
        for w in elems.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::BadIndexSet(format!(
                    "indices must be strictly increasing, got {:?}",
                    elems
                )));
            }
        }
        if let Some(&last) = elems.last() {
            if last > ambient {
                return Err(Error::BadIndexSet(format!(
                    "index {} exceeds ambient {}",
                    last, ambient
                )));
            }
        }
        if elems.first().is_some_and(|&f| f == 0) {
            return Err(Error::BadIndexSet("indices are 1-based".into()));
        }
        Ok(IndexSet { ambient, elems })
    }

    /// Sorts the given labels, returning the set together with the sign of
    /// the sorting permutation; `None` when a label repeats.
    pub fn from_unsorted(ambient: u32, labels: &[u32]) -> Option<(Self, i8)> {
        let mut v: Vec<u32> = labels.to_vec();
        let mut sign = 1i8;
        // insertion sort, counting inversions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        IndexSet::new(ambient, v).ok().map(|s| (s, sign))
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    pub fn elems(&self) -> &[u32] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, k: u32) -> bool {
        self.elems.binary_search(&k).is_ok()
    }

    pub fn sum(&self) -> u64 {
        self.elems.iter().map(|&x| x as u64).sum()
    }

    /// `[N] \ self`.
    pub fn complement(&self) -> Self {
        let elems = (1..=self.ambient).filter(|k| !self.contains(*k)).collect();
        IndexSet {
            ambient: self.ambient,
            elems,
        }
    }

    /// Applies `i ↦ N+1-i` elementwise and resorts.
    pub fn sigma(&self) -> Self {
        let mut elems: Vec<u32> = self.elems.iter().map(|&i| self.ambient + 1 - i).collect();
        elems.reverse();
        IndexSet {
            ambient: self.ambient,
            elems,
        }
    }

    /// Number of entries strictly less than `k`.
    pub fn eta(&self, k: u32) -> u32 {
        self.elems.iter().filter(|&&a| a < k).count() as u32
    }

    /// Union with disjoint-ness check handled by the caller; duplicates
    /// merge silently.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::CardinalityMismatch);
        }
        let mut elems: Vec<u32> = self
            .elems
            .iter()
            .chain(other.elems.iter())
            .copied()
            .collect();
        elems.sort_unstable();
        elems.dedup();
        Ok(IndexSet {
            ambient: self.ambient,
            elems,
        })
    }

    pub fn minus(&self, other: &Self) -> Self {
        let elems = self
            .elems
            .iter()
            .filter(|&&k| !other.contains(k))
            .copied()
            .collect();
        IndexSet {
            ambient: self.ambient,
            elems,
        }
    }

    /// Componentwise comparison on equal-cardinality sets.
    pub fn poset_cmp(&self, other: &Self) -> Result<PosetRel> {
        if self.ambient != other.ambient || self.len() != other.len() {
            return Err(Error::CardinalityMismatch);
        }
        let mut le = true;
        let mut ge = true;
        for (a, b) in self.elems.iter().zip(other.elems.iter()) {
            if a > b {
                le = false;
            }
            if a < b {
                ge = false;
            }
        }
        Ok(match (le, ge) {
            (true, true) => PosetRel::Equal,
            (true, false) => PosetRel::LessEqual,
            (false, true) => PosetRel::GreaterEqual,
            (false, false) => PosetRel::Incomparable,
        })
    }

    /// All k-subsets of `[ambient]` in lexicographic order.
    pub fn all_subsets(ambient: u32, k: usize) -> Vec<IndexSet> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(k);
        fn rec(ambient: u32, k: usize, start: u32, current: &mut Vec<u32>, out: &mut Vec<IndexSet>) {
            if current.len() == k {
                out.push(IndexSet {
                    ambient,
                    elems: current.clone(),
                });
                return;
            }
            let need = k - current.len();
            for v in start..=(ambient.saturating_sub(need as u32 - 1)) {
                current.push(v);
                rec(ambient, k, v + 1, current, out);
                current.pop();
            }
        }
        if k <= ambient as usize {
            rec(ambient, k, 1, &mut current, &mut out);
        }
        out
    }

    /// Parses the display form `[1,2,3]` (ambient supplied by the caller).
    pub fn parse(ambient: u32, s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::BadIndexSet(format!("expected [..], got {s:?}")))?;
        let mut elems = Vec::new();
        for part in inner.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let v: u32 = part
                .parse()
                .map_err(|_| Error::BadIndexSet(format!("bad index {part:?}")))?;
            elems.push(v);
        }
        IndexSet::new(ambient, elems)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ambient: u32, elems: &[u32]) -> IndexSet {
        IndexSet::new(ambient, elems.to_vec()).unwrap()
    }

    #[test]
    fn complement_and_sigma() {
        let s = set(6, &[1, 3, 4, 6]);
        assert_eq!(s.complement(), set(6, &[2, 5]));
        assert_eq!(s.complement().sigma(), set(6, &[2, 5]));
        let t = set(6, &[1, 2, 4, 5]);
        assert_eq!(t.complement().sigma(), set(6, &[1, 4]));
    }

    #[test]
    fn sigma_c_commute_and_involutions() {
        for n in 2..=6u32 {
            for k in 1..=n as usize {
                for s in IndexSet::all_subsets(n, k) {
                    assert_eq!(s.sigma().complement(), s.complement().sigma());
                    assert_eq!(s.sigma().sigma(), s);
                    assert_eq!(s.complement().complement(), s);
                    // (sigma ∘ c)^2 = id
                    assert_eq!(s.complement().sigma().sigma().complement(), s);
                }
            }
        }
    }

    #[test]
    fn eta_counts_left_entries() {
        let a = set(6, &[5, 6]);
        assert_eq!(a.eta(2), 0);
        assert_eq!(a.eta(6), 1);
        assert_eq!(a.eta(7), 2);
    }

    #[test]
    fn poset_comparison() {
        let bottom = set(6, &[1, 2, 3, 4]);
        for s in IndexSet::all_subsets(6, 4) {
            let rel = bottom.poset_cmp(&s).unwrap();
            assert!(matches!(rel, PosetRel::LessEqual | PosetRel::Equal));
        }
        let a = set(6, &[1, 2, 3, 6]);
        let b = set(6, &[1, 2, 4, 5]);
        assert_eq!(a.poset_cmp(&b).unwrap(), PosetRel::Incomparable);
    }

    #[test]
    fn sort_sign() {
        let (s, sign) = IndexSet::from_unsorted(5, &[3, 1, 2]).unwrap();
        assert_eq!(s, set(5, &[1, 2, 3]));
        assert_eq!(sign, 1); // cyclic shift of length 3 is even
        let (_, sign2) = IndexSet::from_unsorted(5, &[2, 1, 3]).unwrap();
        assert_eq!(sign2, -1);
        assert!(IndexSet::from_unsorted(5, &[2, 2, 3]).is_none());
    }

    #[test]
    fn subset_enumeration_counts() {
        assert_eq!(IndexSet::all_subsets(5, 3).len(), 10);
        assert_eq!(IndexSet::all_subsets(6, 4).len(), 15);
        assert_eq!(IndexSet::all_subsets(4, 0).len(), 1);
    }

    #[test]
    fn display_roundtrip() {
        let s = set(6, &[2, 4, 5]);
        assert_eq!(s.to_string(), "[2,4,5]");
        assert_eq!(IndexSet::parse(6, "[2,4,5]").unwrap(), s);
    }
}
