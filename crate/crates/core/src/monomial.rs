//! Sparse monomials: sorted `(variable, exponent)` pairs, no zero exponents.

use crate::vars::VarId;
use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial {
    exps: Vec<(VarId, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: VarId) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    /// Builds from arbitrary pairs; merges duplicates and drops zeros.
    pub fn from_pairs(pairs: &[(VarId, u32)]) -> Self {
        let mut exps: Vec<(VarId, u32)> = pairs.iter().copied().filter(|p| p.1 > 0).collect();
        exps.sort_unstable_by_key(|p| p.0);
        let mut merged: Vec<(VarId, u32)> = Vec::with_capacity(exps.len());
        for (v, e) in exps {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { exps: merged }
    }

    pub fn exps(&self) -> &[(VarId, u32)] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.exps
            .binary_search_by_key(&v, |p| p.0)
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (a, b) = (self.exps[i], other.exps[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    exps.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    exps.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    exps.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&self.exps[i..]);
        exps.extend_from_slice(&other.exps[j..]);
        Monomial { exps }
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: self.exps.iter().map(|&(v, x)| (v, x * e)).collect(),
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        let mut j = 0;
        for &(v, e) in &self.exps {
            while j < other.exps.len() && other.exps[j].0 < v {
                j += 1;
            }
            if j >= other.exps.len() || other.exps[j].0 != v || other.exps[j].1 < e {
                return false;
            }
        }
        true
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient_into(&self, other: &Self) -> Self {
        debug_assert!(self.divides(other));
        let mut exps = Vec::with_capacity(other.exps.len());
        let mut i = 0;
        for &(v, e) in &other.exps {
            let mut rem = e;
            if i < self.exps.len() && self.exps[i].0 == v {
                rem -= self.exps[i].1;
                i += 1;
            }
            if rem > 0 {
                exps.push((v, rem));
            }
        }
        Monomial { exps }
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (a, b) = (self.exps[i], other.exps[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    exps.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    exps.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    exps.push((a.0, a.1.max(b.1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&self.exps[i..]);
        exps.extend_from_slice(&other.exps[j..]);
        Monomial { exps }
    }

    pub fn coprime(&self, other: &Self) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            match self.exps[i].0.cmp(&other.exps[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// Total degree restricted to variables accepted by `pred`.
    pub fn degree_where(&self, pred: impl Fn(VarId) -> bool) -> u32 {
        self.exps
            .iter()
            .filter(|&&(v, _)| pred(v))
            .map(|&(_, e)| e)
            .sum()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "v{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_divide() {
        let a = Monomial::from_pairs(&[(0, 2), (2, 1)]);
        let b = Monomial::from_pairs(&[(0, 1), (1, 3)]);
        let p = a.mul(&b);
        assert_eq!(p, Monomial::from_pairs(&[(0, 3), (1, 3), (2, 1)]));
        assert!(a.divides(&p));
        assert_eq!(a.quotient_into(&p), b);
        assert_eq!(p.degree(), 7);
    }

    #[test]
    fn lcm_and_coprimality() {
        let a = Monomial::from_pairs(&[(0, 2)]);
        let b = Monomial::from_pairs(&[(1, 1)]);
        assert!(a.coprime(&b));
        assert_eq!(a.lcm(&b), Monomial::from_pairs(&[(0, 2), (1, 1)]));
        assert!(!a.coprime(&a));
    }

    #[test]
    fn zero_exponents_dropped() {
        let m = Monomial::from_pairs(&[(3, 0), (1, 2)]);
        assert_eq!(m.exps(), &[(1, 2)]);
    }
}
