//! Hankel matrix sections, their minor tables, and the span equality
//! between sub-maximal minors of the square section and maximal minors of
//! the rectangular one.

use crate::error::Error;
use crate::index_set::IndexSet;
use crate::linalg::{same_row_span, QMatrix};
use crate::matrix::{MinorEngine, PolyMatrix};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::scalar::binomial;
use crate::vars::VariableRegistry;
use crate::Result;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Shape {
    /// `(n+1) x (n+1)`
    Square,
    /// `n x (n+2)`
    Rectangular,
}

/// Which Hankel section to build: minor size `n`, degeneration level `r`
/// (the last `r` variables are set to zero), and the shape.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct HankelSpec {
    pub n: u32,
    pub r: u32,
    pub shape: Shape,
}

impl PartialOrd for Shape {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Shape {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let rank = |s: &Shape| match s {
            Shape::Square => 0,
            Shape::Rectangular => 1,
        };
        rank(self).cmp(&rank(other))
    }
}

impl HankelSpec {
    pub fn new(n: u32, r: u32, shape: Shape) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidConfig(format!("n must be >= 2, got {n}")));
        }
        if r > n - 1 {
            return Err(Error::InvalidConfig(format!(
                "r must satisfy 0 <= r <= n-1, got r={r} for n={n}"
            )));
        }
        Ok(HankelSpec { n, r, shape })
    }

    pub fn rectangular(n: u32, r: u32) -> Result<Self> {
        Self::new(n, r, Shape::Rectangular)
    }

    pub fn square(n: u32, r: u32) -> Result<Self> {
        Self::new(n, r, Shape::Square)
    }

    /// Number of surviving ground variables.
    pub fn x_count(&self) -> u32 {
        2 * self.n + 1 - self.r
    }

    pub fn dims(&self) -> (usize, usize) {
        match self.shape {
            Shape::Square => ((self.n + 1) as usize, (self.n + 1) as usize),
            Shape::Rectangular => (self.n as usize, (self.n + 2) as usize),
        }
    }

    pub fn registry(&self) -> Arc<VariableRegistry> {
        VariableRegistry::x_only(self.x_count())
    }
}

/// Builds the section: entry `(i,j)` (1-based) is `x_{i+j-1}` when
/// `i+j-1 <= 2n+1-r` and zero otherwise, for both shapes.
pub fn build_section(spec: &HankelSpec) -> PolyMatrix {
    let reg = spec.registry();
    let (rows, cols) = spec.dims();
    let cutoff = spec.x_count();
    PolyMatrix::from_fn(&reg, rows, cols, |i, j| {
        let idx = (i + j + 1) as u32; // (i+1)+(j+1)-1
        if idx <= cutoff {
            Polynomial::var(&reg, idx - 1)
        } else {
            Polynomial::zero(&reg)
        }
    })
}

/// Key of one minor: columns only (rows implicit, all of them) for maximal
/// minors of the rectangular section, or an explicit (rows, cols) pair.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum MinorKey {
    Cols(IndexSet),
    RowsCols(IndexSet, IndexSet),
}

/// All minors of one size of a Hankel section, keyed canonically.
pub struct MinorTable {
    pub spec: HankelSpec,
    pub minor_size: usize,
    pub entries: BTreeMap<MinorKey, Polynomial>,
    registry: Arc<VariableRegistry>,
}

impl MinorTable {
    /// The maximal-minor table of the rectangular section: one entry per
    /// column set, computed in a single memo-shared pass.
    pub fn maximal(n: u32, r: u32) -> Result<MinorTable> {
        let spec = HankelSpec::rectangular(n, r)?;
        MinorTable::build(&spec, n as usize)
    }

    pub fn build(spec: &HankelSpec, minor_size: usize) -> Result<MinorTable> {
        let m = build_section(spec);
        let (rows, cols) = (m.rows(), m.cols());
        if minor_size == 0 || minor_size > rows.min(cols) {
            return Err(Error::OutOfRange(format!(
                "minor size {minor_size} out of range for {rows}x{cols}"
            )));
        }
        let mut entries = BTreeMap::new();
        if minor_size == rows {
            // keyed by column set only
            let mut eng = MinorEngine::new(&m, (0..rows).collect());
            for cset in IndexSet::all_subsets(cols as u32, minor_size) {
                let cidx: Vec<usize> = cset.elems().iter().map(|&c| (c - 1) as usize).collect();
                let val = eng.minor(&cidx);
                entries.insert(MinorKey::Cols(cset), val);
            }
        } else {
            for rset in IndexSet::all_subsets(rows as u32, minor_size) {
                let ridx: Vec<usize> = rset.elems().iter().map(|&v| (v - 1) as usize).collect();
                let mut eng = MinorEngine::new(&m, ridx);
                for cset in IndexSet::all_subsets(cols as u32, minor_size) {
                    let cidx: Vec<usize> =
                        cset.elems().iter().map(|&c| (c - 1) as usize).collect();
                    let val = eng.minor(&cidx);
                    entries.insert(MinorKey::RowsCols(rset.clone(), cset), val);
                }
            }
        }
        Ok(MinorTable {
            spec: *spec,
            minor_size,
            entries,
            registry: m.registry().clone(),
        })
    }

    pub fn registry(&self) -> &Arc<VariableRegistry> {
        &self.registry
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Lookup of a maximal minor by its column set.
    pub fn get(&self, cols: &IndexSet) -> Result<&Polynomial> {
        self.entries
            .get(&MinorKey::Cols(cols.clone()))
            .ok_or_else(|| Error::MissingMinor(cols.to_string()))
    }

    /// Column sets of the maximal minors, in canonical order.
    pub fn column_sets(&self) -> Vec<IndexSet> {
        self.entries
            .keys()
            .filter_map(|k| match k {
                MinorKey::Cols(c) => Some(c.clone()),
                MinorKey::RowsCols(..) => None,
            })
            .collect()
    }
}

/// Coefficient matrix of a family of forms in a shared monomial basis.
fn coefficient_matrix(polys: &[&Polynomial], basis: &BTreeMap<Monomial, usize>) -> QMatrix {
    let mut q = QMatrix::zeros(polys.len(), basis.len());
    for (i, p) in polys.iter().enumerate() {
        for (m, c) in p.terms() {
            q.set(i, basis[m], c.clone());
        }
    }
    q
}

/// Does the span of all `n`-minors of the square section equal the span of
/// the maximal minors of the rectangular one? Both families are homogeneous
/// of degree `n`, so span equality decides ideal equality.
pub fn verify_gruson_peskine(n: u32, r: u32) -> Result<bool> {
    let square = MinorTable::build(&HankelSpec::square(n, r)?, n as usize)?;
    let rect = MinorTable::build(&HankelSpec::rectangular(n, r)?, n as usize)?;
    let sq_polys: Vec<&Polynomial> = square.entries.values().collect();
    let rc_polys: Vec<&Polynomial> = rect.entries.values().collect();
    let mut basis: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in sq_polys.iter().chain(rc_polys.iter()) {
        for (m, _) in p.terms() {
            let next = basis.len();
            basis.entry(m.clone()).or_insert(next);
        }
    }
    let a = coefficient_matrix(&sq_polys, &basis);
    let b = coefficient_matrix(&rc_polys, &basis);
    Ok(same_row_span(&a, &b))
}

/// Dimension of the span of the rectangular maximal minors (used by the
/// span-dimension invariant: it equals `C(n+2,2)`).
pub fn minor_span_dimension(n: u32, r: u32) -> Result<usize> {
    let rect = MinorTable::build(&HankelSpec::rectangular(n, r)?, n as usize)?;
    let polys: Vec<&Polynomial> = rect.entries.values().collect();
    let mut basis: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in &polys {
        for (m, _) in p.terms() {
            let next = basis.len();
            basis.entry(m.clone()).or_insert(next);
        }
    }
    Ok(coefficient_matrix(&polys, &basis).rank())
}

pub fn expected_minor_count(n: u32) -> u64 {
    binomial((n + 2) as u64, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    #[test]
    fn rectangular_n2_r1() {
        let spec = HankelSpec::rectangular(2, 1).unwrap();
        let m = build_section(&spec);
        let reg = m.registry().clone();
        let expect = |s: &str| parse_polynomial(&reg, s).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.cols(), 4);
        let grid = [
            ["x1", "x2", "x3", "x4"],
            ["x2", "x3", "x4", "0"],
        ];
        for i in 0..2 {
            for j in 0..4 {
                assert_eq!(m.get(i, j), &expect(grid[i][j]));
            }
        }
    }

    #[test]
    fn square_n3_r2_zero_cells() {
        let spec = HankelSpec::square(3, 2).unwrap();
        let m = build_section(&spec);
        assert_eq!(m.rows(), 4);
        let mut zeros = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                if m.get(i, j).is_zero() {
                    zeros.push((i + 1, j + 1));
                }
            }
        }
        assert_eq!(zeros, vec![(3, 4), (4, 3), (4, 4)]);
        // exactly r(r+1)/2 zero cells
        assert_eq!(zeros.len() as u32, spec.r * (spec.r + 1) / 2);
    }

    #[test]
    fn generic_case_has_no_zeros() {
        let spec = HankelSpec::rectangular(4, 0).unwrap();
        let m = build_section(&spec);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                assert!(!m.get(i, j).is_zero());
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(HankelSpec::rectangular(1, 0).is_err());
        assert!(HankelSpec::rectangular(3, 3).is_err());
        assert!(HankelSpec::rectangular(3, 2).is_ok());
    }

    #[test]
    fn anti_diagonal_constancy() {
        for (n, r) in [(2, 1), (3, 0), (3, 2), (4, 1)] {
            for shape in [Shape::Square, Shape::Rectangular] {
                let spec = HankelSpec::new(n, r, shape).unwrap();
                let m = build_section(&spec);
                let mut by_diag: BTreeMap<usize, &Polynomial> = BTreeMap::new();
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        let e = by_diag.entry(i + j).or_insert_with(|| m.get(i, j));
                        assert_eq!(*e, m.get(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn minor_table_n2_r1() {
        let table = MinorTable::maximal(2, 1).unwrap();
        assert_eq!(table.len(), 6);
        let reg = table.registry().clone();
        let k12 = IndexSet::new(4, vec![1, 2]).unwrap();
        let k34 = IndexSet::new(4, vec![3, 4]).unwrap();
        assert_eq!(
            table.get(&k12).unwrap(),
            &parse_polynomial(&reg, "x1*x3 - x2^2").unwrap()
        );
        assert_eq!(
            table.get(&k34).unwrap(),
            &parse_polynomial(&reg, "-x4^2").unwrap()
        );
        for v in table.entries.values() {
            assert!(!v.is_zero());
            assert_eq!(v.homogeneous_degree(), Some(2));
        }
    }

    #[test]
    fn minor_table_counts() {
        let t = MinorTable::maximal(3, 2).unwrap();
        assert_eq!(t.len(), 10); // C(5,3)
        let sq = MinorTable::build(&HankelSpec::square(3, 2).unwrap(), 3).unwrap();
        assert_eq!(sq.len(), 16); // (n+1)^2 row/col pairs
    }

    #[test]
    fn minors_nonzero_of_degree_n() {
        for n in 2..=4u32 {
            for r in 0..n {
                let t = MinorTable::maximal(n, r).unwrap();
                assert_eq!(t.len() as u64, expected_minor_count(n));
                for p in t.entries.values() {
                    assert!(!p.is_zero(), "minor vanished for n={n} r={r}");
                    assert_eq!(p.homogeneous_degree(), Some(n));
                }
            }
        }
    }

    #[test]
    fn minor_size_out_of_range() {
        let spec = HankelSpec::rectangular(2, 0).unwrap();
        assert!(MinorTable::build(&spec, 3).is_err());
        assert!(MinorTable::build(&spec, 0).is_err());
    }

    #[test]
    fn gruson_peskine_small() {
        assert!(verify_gruson_peskine(2, 1).unwrap());
        assert!(verify_gruson_peskine(3, 2).unwrap());
        assert!(verify_gruson_peskine(3, 0).unwrap());
    }

    #[test]
    fn span_dimension_matches_minor_count() {
        for (n, r) in [(2u32, 0u32), (2, 1), (3, 1)] {
            assert_eq!(
                minor_span_dimension(n, r).unwrap() as u64,
                expected_minor_count(n)
            );
        }
    }
}
