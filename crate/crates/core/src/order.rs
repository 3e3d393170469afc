//! Term orders: lex, graded reverse lex, and block elimination orders,
//! each optionally twisted by a variable permutation.
//!
//! Every order is total, multiplicative and has 1 as its minimum, which is
//! what the Gröbner machinery requires. Registries in this crate never
//! exceed 64 variables, so block membership is a bitmask.

use crate::monomial::Monomial;
use crate::vars::VarId;
use std::cmp::Ordering;
use std::sync::Arc;

/// A priority permutation: `order[0]` is the most significant variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Perm {
    order: Vec<VarId>,
    rank: Vec<u32>,
}

impl Perm {
    pub fn new(order: Vec<VarId>) -> Self {
        let size = order.iter().map(|&v| v as usize + 1).max().unwrap_or(0);
        let mut rank = vec![u32::MAX; size];
        for (r, &v) in order.iter().enumerate() {
            rank[v as usize] = r as u32;
        }
        Perm { order, rank }
    }

    fn rank_of(&self, v: VarId) -> u32 {
        self.rank.get(v as usize).copied().unwrap_or(u32::MAX)
    }

    /// Variables from most to least significant.
    pub fn priority(&self) -> &[VarId] {
        &self.order
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TermOrder {
    Lex(Option<Arc<Perm>>),
    GrevLex(Option<Arc<Perm>>),
    /// Compares on the masked block first (elimination order when the block
    /// holds the variables to eliminate), then on the remaining variables.
    Block {
        first_mask: u64,
        first: Box<TermOrder>,
        rest: Box<TermOrder>,
    },
}

impl TermOrder {
    pub fn lex() -> Self {
        TermOrder::Lex(None)
    }

    pub fn grevlex() -> Self {
        TermOrder::GrevLex(None)
    }

    pub fn grevlex_permuted(priority: Vec<VarId>) -> Self {
        TermOrder::GrevLex(Some(Arc::new(Perm::new(priority))))
    }

    /// Standard implicitization order: the given variables dominate, grevlex
    /// inside each block.
    pub fn eliminate(first_block: &[VarId]) -> Self {
        let mut mask = 0u64;
        for &v in first_block {
            assert!(v < 64, "registry too large for block orders");
            mask |= 1 << v;
        }
        TermOrder::Block {
            first_mask: mask,
            first: Box::new(TermOrder::grevlex()),
            rest: Box::new(TermOrder::grevlex()),
        }
    }

    /// `Greater` means `a` is the larger monomial.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.cmp_masked(a, b, u64::MAX)
    }

    pub fn max<'m>(&self, a: &'m Monomial, b: &'m Monomial) -> &'m Monomial {
        if self.cmp(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }

    fn cmp_masked(&self, a: &Monomial, b: &Monomial, mask: u64) -> Ordering {
        match self {
            TermOrder::Lex(None) => lex_cmp(a, b, mask),
            TermOrder::GrevLex(None) => grevlex_cmp(a, b, mask),
            TermOrder::Lex(Some(p)) => permuted_cmp(a, b, mask, p, false),
            TermOrder::GrevLex(Some(p)) => permuted_cmp(a, b, mask, p, true),
            TermOrder::Block {
                first_mask,
                first,
                rest,
            } => {
                let c = first.cmp_masked(a, b, mask & first_mask);
                if c != Ordering::Equal {
                    return c;
                }
                rest.cmp_masked(a, b, mask & !first_mask)
            }
        }
    }

    /// Sorts terms so the leading (largest) monomial comes first.
    pub fn sort_desc<T>(&self, terms: &mut [(Monomial, T)]) {
        terms.sort_by(|p, q| self.cmp(&q.0, &p.0));
    }
}

fn in_mask(v: VarId, mask: u64) -> bool {
    v < 64 && (mask >> v) & 1 == 1
}

fn masked_degree(m: &Monomial, mask: u64) -> u64 {
    m.exps()
        .iter()
        .filter(|&&(v, _)| in_mask(v, mask))
        .map(|&(_, e)| e as u64)
        .sum()
}

fn lex_cmp(a: &Monomial, b: &Monomial, mask: u64) -> Ordering {
    let ae = a.exps();
    let be = b.exps();
    let (mut i, mut j) = (0, 0);
    loop {
        while i < ae.len() && !in_mask(ae[i].0, mask) {
            i += 1;
        }
        while j < be.len() && !in_mask(be[j].0, mask) {
            j += 1;
        }
        match (i < ae.len(), j < be.len()) {
            (false, false) => return Ordering::Equal,
            (true, false) => return Ordering::Greater,
            (false, true) => return Ordering::Less,
            (true, true) => {
                let (va, ea) = ae[i];
                let (vb, eb) = be[j];
                match va.cmp(&vb) {
                    // a has a positive exponent at a more significant variable
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
}

fn grevlex_cmp(a: &Monomial, b: &Monomial, mask: u64) -> Ordering {
    let da = masked_degree(a, mask);
    let db = masked_degree(b, mask);
    if da != db {
        return da.cmp(&db);
    }
    // Reverse walk from the least significant variable: the monomial with
    // the smaller exponent at the first difference is the larger one.
    let ae = a.exps();
    let be = b.exps();
    let (mut i, mut j) = (ae.len(), be.len());
    loop {
        while i > 0 && !in_mask(ae[i - 1].0, mask) {
            i -= 1;
        }
        while j > 0 && !in_mask(be[j - 1].0, mask) {
            j -= 1;
        }
        match (i > 0, j > 0) {
            (false, false) => return Ordering::Equal,
            // a still has weight on the tail where b has none: a is smaller
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            (true, true) => {
                let (va, ea) = ae[i - 1];
                let (vb, eb) = be[j - 1];
                match va.cmp(&vb) {
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Equal => {
                        if ea != eb {
                            return eb.cmp(&ea);
                        }
                        i -= 1;
                        j -= 1;
                    }
                }
            }
        }
    }
}

fn permuted_cmp(a: &Monomial, b: &Monomial, mask: u64, perm: &Perm, graded_rev: bool) -> Ordering {
    let gather = |m: &Monomial| -> Vec<(u32, u32)> {
        let mut v: Vec<(u32, u32)> = m
            .exps()
            .iter()
            .filter(|&&(var, _)| in_mask(var, mask))
            .map(|&(var, e)| (perm.rank_of(var), e))
            .collect();
        v.sort_unstable();
        v
    };
    let pa = gather(a);
    let pb = gather(b);
    if graded_rev {
        let da: u64 = pa.iter().map(|&(_, e)| e as u64).sum();
        let db: u64 = pb.iter().map(|&(_, e)| e as u64).sum();
        if da != db {
            return da.cmp(&db);
        }
        let (mut i, mut j) = (pa.len(), pb.len());
        loop {
            match (i > 0, j > 0) {
                (false, false) => return Ordering::Equal,
                (true, false) => return Ordering::Less,
                (false, true) => return Ordering::Greater,
                (true, true) => {
                    let (ra, ea) = pa[i - 1];
                    let (rb, eb) = pb[j - 1];
                    match ra.cmp(&rb) {
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Equal => {
                            if ea != eb {
                                return eb.cmp(&ea);
                            }
                            i -= 1;
                            j -= 1;
                        }
                    }
                }
            }
        }
    } else {
        let (mut i, mut j) = (0, 0);
        loop {
            match (i < pa.len(), j < pb.len()) {
                (false, false) => return Ordering::Equal,
                (true, false) => return Ordering::Greater,
                (false, true) => return Ordering::Less,
                (true, true) => {
                    let (ra, ea) = pa[i];
                    let (rb, eb) = pb[j];
                    match ra.cmp(&rb) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => {
                            if ea != eb {
                                return ea.cmp(&eb);
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(pairs: &[(u32, u32)]) -> Monomial {
        Monomial::from_pairs(pairs)
    }

    #[test]
    fn one_is_minimal() {
        for ord in [TermOrder::lex(), TermOrder::grevlex()] {
            assert_eq!(ord.cmp(&m(&[(0, 1)]), &Monomial::one()), Ordering::Greater);
            assert_eq!(ord.cmp(&Monomial::one(), &m(&[(3, 2)])), Ordering::Less);
        }
    }

    #[test]
    fn lex_ordering() {
        let ord = TermOrder::lex();
        // x0 > x1^5 in lex
        assert_eq!(ord.cmp(&m(&[(0, 1)]), &m(&[(1, 5)])), Ordering::Greater);
        assert_eq!(
            ord.cmp(&m(&[(0, 1), (1, 1)]), &m(&[(0, 1), (2, 9)])),
            Ordering::Greater
        );
    }

    #[test]
    fn grevlex_ordering() {
        let ord = TermOrder::grevlex();
        // degree decides first
        assert_eq!(ord.cmp(&m(&[(2, 3)]), &m(&[(0, 2)])), Ordering::Greater);
        // equal degree: smaller exponent on the last variable wins
        assert_eq!(
            ord.cmp(&m(&[(0, 1), (2, 1)]), &m(&[(1, 2)])),
            Ordering::Less
        );
        // classic: x0*x1 > x0*x2 > x1*x2
        assert_eq!(
            ord.cmp(&m(&[(0, 1), (1, 1)]), &m(&[(0, 1), (2, 1)])),
            Ordering::Greater
        );
    }

    #[test]
    fn elimination_block_dominates() {
        let ord = TermOrder::eliminate(&[0, 1]);
        // any monomial touching the first block beats any block-free one
        assert_eq!(ord.cmp(&m(&[(0, 1)]), &m(&[(2, 7)])), Ordering::Greater);
        // higher block degree wins regardless of the tail
        assert_eq!(
            ord.cmp(&m(&[(1, 2), (2, 1)]), &m(&[(0, 1), (2, 9)])),
            Ordering::Greater
        );
        // within the block, grevlex: x0 beats x1 at equal block degree
        assert_eq!(ord.cmp(&m(&[(1, 1)]), &m(&[(0, 1)])), Ordering::Less);
    }

    #[test]
    fn multiplicative_on_samples() {
        let ords = [TermOrder::lex(), TermOrder::grevlex(), TermOrder::eliminate(&[1])];
        let mons = [
            Monomial::one(),
            m(&[(0, 1)]),
            m(&[(1, 2)]),
            m(&[(0, 1), (2, 1)]),
            m(&[(2, 3)]),
        ];
        for ord in &ords {
            for a in &mons {
                for b in &mons {
                    for w in &mons {
                        let c = ord.cmp(a, b);
                        assert_eq!(ord.cmp(&a.mul(w), &b.mul(w)), c);
                    }
                }
            }
        }
    }

    #[test]
    fn permuted_grevlex_swaps_priority() {
        let ord = TermOrder::grevlex_permuted(vec![2, 1, 0]);
        // with priority (x2, x1, x0), x2 now beats x0 at equal degree
        assert_eq!(ord.cmp(&m(&[(2, 1)]), &m(&[(0, 1)])), Ordering::Greater);
    }
}
