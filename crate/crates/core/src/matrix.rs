//! Matrices over polynomial rings: determinants and generic rank.
//!
//! Two determinant strategies cross-check each other. `cofactor-memo`
//! expands along rows and memoizes sub-determinants by column subset, so
//! all maximal minors of one section share work; `bareiss` is the
//! fraction-free elimination with exact polynomial division.

use crate::error::Error;
use crate::linalg::QMatrix;
use crate::poly::Polynomial;
use crate::scalar::{self, Scalar};
use crate::vars::VariableRegistry;
use crate::Result;
use num::traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DetStrategy {
    CofactorMemo,
    Bareiss,
}

#[derive(Clone, PartialEq)]
pub struct PolyMatrix {
    registry: Arc<VariableRegistry>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(registry: &Arc<VariableRegistry>, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            registry: registry.clone(),
            rows,
            cols,
            entries: vec![Polynomial::zero(registry); rows * cols],
        }
    }

    pub fn from_fn(
        registry: &Arc<VariableRegistry>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Polynomial,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix {
            registry: registry.clone(),
            rows,
            cols,
            entries,
        }
    }

    pub fn registry(&self) -> &Arc<VariableRegistry> {
        &self.registry
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        assert!(i < self.rows && j < self.cols, "entry access out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        assert!(i < self.rows && j < self.cols, "entry access out of bounds");
        self.entries[i * self.cols + j] = p;
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        PolyMatrix::from_fn(&self.registry, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    pub fn determinant(&self, strategy: DetStrategy) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        match strategy {
            DetStrategy::CofactorMemo => {
                let mut eng = MinorEngine::new(self, (0..self.rows).collect());
                let cols: Vec<usize> = (0..self.cols).collect();
                Ok(eng.minor(&cols))
            }
            DetStrategy::Bareiss => self.det_bareiss(),
        }
    }

    fn det_bareiss(&self) -> Result<Polynomial> {
        let n = self.rows;
        if n == 0 {
            return Ok(Polynomial::one(&self.registry));
        }
        let mut b: Vec<Vec<Polynomial>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = 1i32;
        let mut prev = Polynomial::one(&self.registry);
        for k in 0..n - 1 {
            if b[k][k].is_zero() {
                match (k + 1..n).find(|&i| !b[i][k].is_zero()) {
                    Some(i) => {
                        b.swap(k, i);
                        sign = -sign;
                    }
                    None => return Ok(Polynomial::zero(&self.registry)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&b[k][k] * &b[i][j]) - &(&b[i][k] * &b[k][j]);
                    b[i][j] = num.exact_div(&prev)?;
                }
            }
            for row in b.iter_mut().skip(k + 1) {
                row[k] = Polynomial::zero(&self.registry);
            }
            prev = b[k][k].clone();
        }
        let det = b[n - 1][n - 1].clone();
        Ok(if sign < 0 { det.neg() } else { det })
    }

    /// Evaluates every entry at a rational point.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<QMatrix> {
        let mut q = QMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                q.set(i, j, self.get(i, j).evaluate(point)?);
            }
        }
        Ok(q)
    }

    /// Rank over the fraction field, estimated from below by evaluating at
    /// seeded random rational points (5 retries) and never above the true
    /// rank. With `certify`, the reported rank comes with a nonvanishing
    /// minor: expanded symbolically up to 8x8, and witnessed by an exact
    /// nonzero rational evaluation beyond that.
    pub fn rank_generic(&self, seed: u64, certify: bool) -> Result<RankEstimate> {
        const RETRIES: usize = 5;
        const BOUND: i64 = 10_000;
        const EXPAND_LIMIT: usize = 8;
        if self.rows == 0 || self.cols == 0 {
            return Ok(RankEstimate {
                rank: 0,
                certificate: None,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nvars = self.registry.num_vars() as usize;
        let mut best: Option<(usize, Vec<usize>, Vec<usize>, Vec<Scalar>)> = None;
        for _ in 0..RETRIES {
            let point: Vec<Scalar> = (0..nvars)
                .map(|_| scalar::from_int(rng.gen_range(-BOUND..=BOUND)))
                .collect();
            let q = self.evaluate(&point)?;
            let (rank, rows, cols) = q.rank_with_pivots();
            if best.as_ref().map(|b| b.0).unwrap_or(0) < rank || best.is_none() {
                best = Some((rank, rows, cols, point));
            }
        }
        let (rank, rows, cols, point) = best.expect("at least one retry ran");
        let certificate = if certify && rank > 0 {
            let sub = self.submatrix(&rows, &cols);
            let value = sub.evaluate(&point)?.determinant_value();
            debug_assert!(!value.is_zero());
            let minor = if rank <= EXPAND_LIMIT {
                let p = sub.determinant(DetStrategy::CofactorMemo)?;
                debug_assert!(!p.is_zero());
                Some(p)
            } else {
                None
            };
            Some(RankCertificate {
                rows,
                cols,
                witness_point: point,
                witness_value: value,
                minor,
            })
        } else {
            None
        };
        Ok(RankEstimate { rank, certificate })
    }
}

/// A certified lower bound for the generic rank: the named submatrix has
/// nonzero determinant, witnessed by an exact rational evaluation and, when
/// small enough, by the expanded minor itself.
#[derive(Clone, Debug)]
pub struct RankCertificate {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub witness_point: Vec<Scalar>,
    pub witness_value: Scalar,
    pub minor: Option<Polynomial>,
}

#[derive(Clone, Debug)]
pub struct RankEstimate {
    pub rank: usize,
    pub certificate: Option<RankCertificate>,
}

impl QMatrix {
    /// Determinant of a square rational matrix by elimination.
    pub fn determinant_value(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = scalar::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m.get(i, k).is_zero()) else {
                return scalar::zero();
            };
            if p != k {
                for j in 0..n {
                    let a = m.get(k, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(k, j, b);
                    m.set(p, j, a);
                }
                det = -det;
            }
            let piv = m.get(k, k).clone();
            det = &det * &piv;
            for i in k + 1..n {
                if !m.get(i, k).is_zero() {
                    let f = m.get(i, k) / &piv;
                    for j in k..n {
                        let v = m.get(i, j) - &(m.get(k, j) * &f);
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }
}

/// Shared-work engine for many minors of one matrix: fixes a row list and
/// memoizes sub-determinants by column subset while expanding row by row.
pub struct MinorEngine<'a> {
    matrix: &'a PolyMatrix,
    row_ids: Vec<usize>,
    memo: HashMap<u64, Polynomial>,
}

impl<'a> MinorEngine<'a> {
    pub fn new(matrix: &'a PolyMatrix, row_ids: Vec<usize>) -> Self {
        assert!(matrix.cols() <= 64, "column mask restricted to 64 columns");
        MinorEngine {
            matrix,
            row_ids,
            memo: HashMap::new(),
        }
    }

    /// Minor on the fixed rows and the given (ascending) columns.
    pub fn minor(&mut self, cols: &[usize]) -> Polynomial {
        assert_eq!(cols.len(), self.row_ids.len(), "minor must be square");
        let mut mask = 0u64;
        for &c in cols {
            mask |= 1 << c;
        }
        self.det_rec(0, mask)
    }

    fn det_rec(&mut self, depth: usize, mask: u64) -> Polynomial {
        if mask == 0 {
            return Polynomial::one(self.matrix.registry());
        }
        if let Some(hit) = self.memo.get(&mask) {
            return hit.clone();
        }
        let row = self.row_ids[depth];
        let mut acc = Polynomial::zero(self.matrix.registry());
        let mut sign_pos = 0u32;
        let mut rest = mask;
        while rest != 0 {
            let col = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let entry = self.matrix.get(row, col);
            if !entry.is_zero() {
                let sub = self.det_rec(depth + 1, mask & !(1 << col));
                let signed = if sign_pos % 2 == 0 {
                    entry.checked_mul(&sub).expect("same registry")
                } else {
                    entry.checked_mul(&sub).expect("same registry").neg()
                };
                acc = acc.checked_add(&signed).expect("same registry");
            }
            sign_pos += 1;
        }
        self.memo.insert(mask, acc.clone());
        acc
    }
}
