//! Exact linear algebra over the rationals: RREF, rank, kernel, span tests.

use crate::scalar::{self, Scalar};
use num::traits::Zero;

/// Dense rational matrix, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![scalar::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    /// In-place reduced row echelon form. Returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            // first nonzero entry in this column at or below `row`
            let Some(p) = (row..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = {
                let piv = self.get(row, col).clone();
                scalar::one() / piv
            };
            for j in col..self.cols {
                let v = self.get(row, j) * &inv;
                self.set(row, j, v);
            }
            for i in 0..self.rows {
                if i != row && !self.get(i, col).is_zero() {
                    let factor = self.get(i, col).clone();
                    for j in col..self.cols {
                        let v = self.get(i, j) - &(self.get(row, j) * &factor);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Rank together with one choice of pivot rows and pivot columns that
    /// exhibit an invertible square submatrix.
    pub fn rank_with_pivots(&self) -> (usize, Vec<usize>, Vec<usize>) {
        // Gaussian elimination without normalization, tracking orig rows.
        let mut m = self.clone();
        let mut row_of = (0..self.rows).collect::<Vec<usize>>();
        let mut pr = Vec::new();
        let mut pc = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            row_of.swap(row, p);
            let piv = m.get(row, col).clone();
            for i in row + 1..m.rows {
                if !m.get(i, col).is_zero() {
                    let f = m.get(i, col) / &piv;
                    for j in col..m.cols {
                        let v = m.get(i, j) - &(m.get(row, j) * &f);
                        m.set(i, j, v);
                    }
                }
            }
            pr.push(row_of[row]);
            pc.push(col);
            row += 1;
        }
        (pr.len(), pr, pc)
    }

    /// Basis of the right kernel `{v : Av = 0}` in reduced echelon shape.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![scalar::zero(); self.cols];
            v[f] = scalar::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.get(r, f).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        QMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }
}

/// Do two row spans coincide? Decided exactly by three rank computations.
pub fn same_row_span(a: &QMatrix, b: &QMatrix) -> bool {
    if a.cols != b.cols {
        return false;
    }
    let ra = a.rank();
    let rb = b.rank();
    ra == rb && a.stack(b).rank() == ra
}
