//! Block matrices over Hankel columns and their generalized Laplace
//! expansions: the quadratic relations `LAP_a` and the degree-n staircase
//! relation `f_lap`.
//!
//! A `LabeledBlockMatrix` has row blocks of `n` rows each; every cell of a
//! block is either zero or a column label `C_j` standing for the j-th
//! column of a backing Hankel section. Expanding block by block from the
//! bottom turns its determinant into a signed sum of products of maximal
//! minors, which is exactly the relation the matrix encodes.

use crate::error::Error;
use crate::hankel::{build_section, HankelSpec};
use crate::index_set::IndexSet;
use crate::matrix::PolyMatrix;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::scalar::{self, binomial};
use crate::vars::VariableRegistry;
use crate::Result;
use itertools::Itertools;
use num::traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Column labels per row block: `Some(j)` is the label `C_j` (1-based),
/// `None` is a zero cell.
#[derive(Clone, Debug)]
pub struct LabeledBlockMatrix {
    pub n: u32,
    pub backing: HankelSpec,
    /// `labels[b][c]` is the cell of row block `b` (top first) at column `c`.
    pub labels: Vec<Vec<Option<u32>>>,
}

/// One summand of a generalized Laplace expansion: a sign and one column
/// set per row block (top block first). The sign already includes both the
/// Laplace position sign and the sort sign of each factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionTerm {
    pub sign: i8,
    pub factors: Vec<IndexSet>,
}

const DEFAULT_EXPANSION_NODES: u64 = 100_000_000;

impl LabeledBlockMatrix {
    pub fn from_labels(
        n: u32,
        backing: HankelSpec,
        labels: Vec<Vec<Option<u32>>>,
    ) -> Result<Self> {
        let cols = labels.first().map(|r| r.len()).unwrap_or(0);
        if labels.is_empty() || labels.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidConfig("ragged block labels".into()));
        }
        if cols != labels.len() * n as usize {
            return Err(Error::InvalidConfig(
                "block matrix must be square: cols == blocks * n".into(),
            ));
        }
        for row in &labels {
            for &l in row {
                if let Some(j) = l {
                    if j == 0 || j > n + 2 {
                        return Err(Error::OutOfRange(format!("column label C_{j}")));
                    }
                }
            }
        }
        Ok(LabeledBlockMatrix { n, backing, labels })
    }

    pub fn block_count(&self) -> usize {
        self.labels.len()
    }

    pub fn col_count(&self) -> usize {
        self.labels[0].len()
    }

    /// Replaces every label by the actual Hankel column, stacking the
    /// blocks into one square polynomial matrix.
    pub fn realize(&self) -> PolyMatrix {
        let section = build_section(&self.backing);
        let n = self.n as usize;
        let size = self.col_count();
        PolyMatrix::from_fn(section.registry(), size, size, |row, col| {
            let block = row / n;
            let inner = row % n;
            match self.labels[block][col] {
                Some(j) => section.get(inner, (j - 1) as usize).clone(),
                None => Polynomial::zero(section.registry()),
            }
        })
    }

    /// Generalized Laplace expansion, bottom block upward. Row and column
    /// position signs use the current (un-deleted) numbering at each step.
    pub fn expand(&self) -> Result<Vec<ExpansionTerm>> {
        self.expand_with_budget(DEFAULT_EXPANSION_NODES)
    }

    pub fn expand_with_budget(&self, max_nodes: u64) -> Result<Vec<ExpansionTerm>> {
        let active: Vec<usize> = (0..self.col_count()).collect();
        let mut out = Vec::new();
        let mut nodes = 0u64;
        self.rec(
            self.block_count(),
            &active,
            1,
            &mut Vec::new(),
            &mut out,
            &mut nodes,
            max_nodes,
        )?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        &self,
        blocks_left: usize,
        active: &[usize],
        sign: i8,
        factors_rev: &mut Vec<IndexSet>,
        out: &mut Vec<ExpansionTerm>,
        nodes: &mut u64,
        max_nodes: u64,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > max_nodes {
            return Err(Error::BudgetExceeded(format!(
                "block expansion exceeded {max_nodes} nodes"
            )));
        }
        let n = self.n as usize;
        let ambient = self.n + 2;
        let bottom = blocks_left - 1;
        if blocks_left == 1 {
            // the final block takes every remaining column, no position sign
            let mut labels = Vec::with_capacity(active.len());
            for &c in active {
                match self.labels[0][c] {
                    Some(j) => labels.push(j),
                    None => return Ok(()),
                }
            }
            if let Some((set, s)) = IndexSet::from_unsorted(ambient, &labels) {
                let mut factors = vec![set];
                factors.extend(factors_rev.iter().rev().cloned());
                out.push(ExpansionTerm {
                    sign: sign * s,
                    factors,
                });
            }
            return Ok(());
        }
        // rows of the bottom block in the current numbering
        let rows_sum: u64 = (((blocks_left - 1) * n + 1)..=(blocks_left * n))
            .map(|k| k as u64)
            .sum();
        // forced: only the bottom block can take these columns
        let mut forced: Vec<usize> = Vec::new();
        let mut optional: Vec<usize> = Vec::new();
        for (pos, &c) in active.iter().enumerate() {
            let in_bottom = self.labels[bottom][c].is_some();
            let in_upper = (0..bottom).any(|b| self.labels[b][c].is_some());
            match (in_bottom, in_upper) {
                (false, false) => return Ok(()), // dead column: determinant is zero
                (true, false) => forced.push(pos),
                (true, true) => optional.push(pos),
                (false, true) => {}
            }
        }
        if forced.len() > n {
            return Ok(());
        }
        let need = n - forced.len();
        if optional.len() < need {
            return Ok(());
        }
        for chosen in optional.iter().copied().combinations(need) {
            let mut positions: Vec<usize> = forced.iter().copied().chain(chosen).collect();
            positions.sort_unstable();
            let labels: Vec<u32> = positions
                .iter()
                .map(|&p| self.labels[bottom][active[p]].expect("candidate positions are labeled"))
                .collect();
            let Some((set, sort_sign)) = IndexSet::from_unsorted(ambient, &labels) else {
                continue; // repeated label: the block minor vanishes
            };
            let cols_sum: u64 = positions.iter().map(|&p| (p + 1) as u64).sum();
            let laplace_sign = if (rows_sum + cols_sum) % 2 == 0 { 1 } else { -1 };
            let remaining: Vec<usize> = active
                .iter()
                .enumerate()
                .filter(|(p, _)| !positions.contains(p))
                .map(|(_, &c)| c)
                .collect();
            factors_rev.push(set);
            self.rec(
                blocks_left - 1,
                &remaining,
                sign * laplace_sign * sort_sign,
                factors_rev,
                out,
                nodes,
                max_nodes,
            )?;
            factors_rev.pop();
        }
        Ok(())
    }
}

/// Collects expansion terms into a polynomial in the T-ring of Gr(n, n+2),
/// one variable per block minor.
pub fn expansion_to_t(
    registry: &Arc<VariableRegistry>,
    terms: &[ExpansionTerm],
) -> Result<Polynomial> {
    let mut p = Polynomial::zero(registry);
    for t in terms {
        let mut pairs = Vec::with_capacity(t.factors.len());
        for f in &t.factors {
            pairs.push((registry.t_var(f)?, 1));
        }
        p.add_term(Monomial::from_pairs(&pairs), scalar::from_int(t.sign as i64));
    }
    Ok(p)
}

/// The 2n x 2n matrix `L_a`: top block `(C_1..C_{n+2} | 0..0)`, bottom
/// block `(C_2..C_{n+2}, 0 | C_{a_1}..C_{a_{n-2}})`, backed by the most
/// degenerate rectangular section.
pub fn build_l_a(n: u32, a: &IndexSet) -> Result<LabeledBlockMatrix> {
    if n < 2 {
        return Err(Error::InvalidConfig("n must be >= 2".into()));
    }
    if a.ambient() != n + 2 || a.len() != (n - 2) as usize {
        return Err(Error::CardinalityMismatch);
    }
    let cols = 2 * n as usize;
    let mut top = vec![None; cols];
    let mut bottom = vec![None; cols];
    for j in 0..(n + 2) as usize {
        top[j] = Some(j as u32 + 1);
    }
    for j in 0..(n + 1) as usize {
        bottom[j] = Some(j as u32 + 2);
    }
    // position n+2 stays zero; then the a-labels
    for (k, &aj) in a.elems().iter().enumerate() {
        bottom[(n + 2) as usize + k] = Some(aj);
    }
    LabeledBlockMatrix::from_labels(
        n,
        HankelSpec::rectangular(n, n - 1)?,
        vec![top, bottom],
    )
}

/// The Laplace relation `LAP_a` straight from the sign formula
/// `sgn(i,j) = (-1)^{i+j+1+η_i+η_j}` over pairs of `B = {2..n+2} \ a`.
pub fn lap_polynomial(
    registry: &Arc<VariableRegistry>,
    n: u32,
    a: &IndexSet,
) -> Result<Polynomial> {
    if a.ambient() != n + 2 || a.len() != (n - 2) as usize {
        return Err(Error::CardinalityMismatch);
    }
    let ambient = n + 2;
    let full = IndexSet::new(ambient, (1..=ambient).collect())?;
    let b_set: Vec<u32> = (2..=ambient).filter(|k| !a.contains(*k)).collect();
    let mut p = Polynomial::zero(registry);
    for (pi, &i) in b_set.iter().enumerate() {
        for &j in b_set.iter().skip(pi + 1) {
            let eta = a.eta(i) + a.eta(j);
            let sign = if (i + j + 1 + eta) % 2 == 0 { 1 } else { -1 };
            let first = a.union(&IndexSet::new(ambient, vec![i, j])?)?;
            let second = full.minus(&IndexSet::new(ambient, vec![i - 1, j - 1])?);
            let m = Monomial::from_pairs(&[(registry.t_var(&first)?, 1), (registry.t_var(&second)?, 1)]);
            p.add_term(m, scalar::from_int(sign));
        }
    }
    Ok(p)
}

/// `LAP_a` by actually expanding `L_a`; must agree with the sign formula
/// term by term.
pub fn lap_from_expansion(
    registry: &Arc<VariableRegistry>,
    n: u32,
    a: &IndexSet,
) -> Result<Polynomial> {
    let lbm = build_l_a(n, a)?;
    let terms = lbm.expand()?;
    expansion_to_t(registry, &terms)
}

/// All Laplace relations of the maximal degeneration, indexed by the
/// `C(n+2, n-2)` choices of `a`.
pub fn all_lap_polynomials(
    registry: &Arc<VariableRegistry>,
    n: u32,
) -> Result<Vec<(IndexSet, Polynomial)>> {
    let mut out = Vec::new();
    for a in IndexSet::all_subsets(n + 2, (n - 2) as usize) {
        let p = lap_polynomial(registry, n, &a)?;
        out.push((a, p));
    }
    Ok(out)
}

/// The staircase matrix `L[1]`: n row blocks and n^2 columns. The first
/// vertical block of width n+2 holds `(C_1..C_{n+2} / C_2..C_{n+2},0)` in
/// row blocks 1,2; each later vertical block of width n+1 holds
/// `(C_1..C_{n+1} / C_2..C_{n+2})` in row blocks k,k+1.
pub fn build_l1(n: u32) -> Result<LabeledBlockMatrix> {
    if n < 2 {
        return Err(Error::InvalidConfig("n must be >= 2".into()));
    }
    let blocks = n as usize;
    let cols = (n * n) as usize;
    let mut labels = vec![vec![None; cols]; blocks];
    // first vertical block: columns 0..n+2
    for p in 0..(n + 2) as usize {
        labels[0][p] = Some(p as u32 + 1);
    }
    for p in 0..(n + 1) as usize {
        labels[1][p] = Some(p as u32 + 2);
    }
    // vertical blocks k = 2..n-1 (1-based), width n+1
    let mut offset = (n + 2) as usize;
    for k in 2..n as usize {
        for p in 0..(n + 1) as usize {
            labels[k - 1][offset + p] = Some(p as u32 + 1);
            labels[k][offset + p] = Some(p as u32 + 2);
        }
        offset += (n + 1) as usize;
    }
    LabeledBlockMatrix::from_labels(n, HankelSpec::rectangular(n, 1)?, labels)
}

/// The degree-n relation from `L[1]`, with the global sign normalized so
/// the pure power `T_{2..n,n+2}^n` has coefficient -1.
pub fn f_lap(registry: &Arc<VariableRegistry>, n: u32) -> Result<Polynomial> {
    f_lap_with_budget(registry, n, DEFAULT_EXPANSION_NODES)
}

pub fn f_lap_with_budget(
    registry: &Arc<VariableRegistry>,
    n: u32,
    max_nodes: u64,
) -> Result<Polynomial> {
    let lbm = build_l1(n)?;
    let terms = lbm.expand_with_budget(max_nodes)?;
    let raw = expansion_to_t(registry, &terms)?;
    let anchor = anchor_monomial(registry, n)?;
    let c = raw.coeff(&anchor);
    if c.is_zero() {
        return Err(Error::InvalidConfig(
            "expansion lost its anchor monomial".into(),
        ));
    }
    // scale by -1/c so the anchor coefficient is exactly -1
    let factor = -scalar::one() / c;
    Ok(raw.scale(&factor))
}

/// `T_{2..n,n+2}^n`, the anchor of the sign normalization.
pub fn anchor_monomial(registry: &Arc<VariableRegistry>, n: u32) -> Result<Monomial> {
    let mut elems: Vec<u32> = (2..=n).collect();
    elems.push(n + 2);
    let set = IndexSet::new(n + 2, elems)?;
    Ok(Monomial::from_pairs(&[(registry.t_var(&set)?, n)]))
}

/// `T_{2..n+1}^{n-1} * T_{3..n+2}`, the second distinguished monomial of
/// the structure statement.
pub fn companion_monomial(registry: &Arc<VariableRegistry>, n: u32) -> Result<Monomial> {
    let first = IndexSet::new(n + 2, (2..=n + 1).collect())?;
    let second = IndexSet::new(n + 2, (3..=n + 2).collect())?;
    Ok(Monomial::from_pairs(&[
        (registry.t_var(&first)?, n - 1),
        (registry.t_var(&second)?, 1),
    ]))
}

/// The three distinguished variables of the structure statement.
pub fn distinguished_vars(registry: &Arc<VariableRegistry>, n: u32) -> Result<[u32; 3]> {
    let a = IndexSet::new(n + 2, (2..=n + 1).collect())?;
    let b = IndexSet::new(n + 2, (3..=n + 2).collect())?;
    let mut c_elems: Vec<u32> = (2..=n).collect();
    c_elems.push(n + 2);
    let c = IndexSet::new(n + 2, c_elems)?;
    Ok([
        registry.t_var(&a)?,
        registry.t_var(&b)?,
        registry.t_var(&c)?,
    ])
}

/// Number of Laplace relations and their term counts, per the combinatorial
/// description: 6 terms when `1 ∈ a`, 3 otherwise.
pub fn expected_lap_term_count(_n: u32, a: &IndexSet) -> usize {
    if a.contains(1) {
        6
    } else {
        3
    }
}

pub fn expected_lap_relation_count(n: u32) -> u64 {
    binomial((n + 2) as u64, 4)
}

/// The intermediate two-block matrix from expanding `L[1]` one level for
/// n = 3: `(C_1..C_{n+2}, 0.. / C_2..C_{n+2}, 0, C_i)`, used by the
/// decomposition identity.
pub fn intermediate_l1_matrix(n: u32, i: u32) -> Result<LabeledBlockMatrix> {
    let cols = 2 * n as usize;
    let mut top = vec![None; cols];
    let mut bottom = vec![None; cols];
    for j in 0..(n + 2) as usize {
        top[j] = Some(j as u32 + 1);
    }
    for j in 0..(n + 1) as usize {
        bottom[j] = Some(j as u32 + 2);
    }
    bottom[cols - 1] = Some(i);
    LabeledBlockMatrix::from_labels(n, HankelSpec::rectangular(n, 1)?, vec![top, bottom])
}

/// Checks an expansion against the realized determinant, symbolically:
/// `Σ sign * Π minor(factor) == det(realized)` with minors drawn from the
/// backing section's maximal-minor table.
pub fn expansion_matches_determinant(lbm: &LabeledBlockMatrix) -> Result<bool> {
    use crate::hankel::MinorTable;
    use crate::matrix::DetStrategy;
    let table = MinorTable::maximal(lbm.backing.n, lbm.backing.r)?;
    let reg = table.registry().clone();
    let mut sum = Polynomial::zero(&reg);
    for t in lbm.expand()? {
        let mut prod = Polynomial::constant(&reg, scalar::from_int(t.sign as i64));
        for f in &t.factors {
            prod = prod.checked_mul(table.get(f)?)?;
        }
        sum = sum.checked_add(&prod)?;
    }
    let det = lbm.realize().determinant(DetStrategy::CofactorMemo)?;
    Ok(sum == det)
}

/// Same check at a seeded random rational point (for sizes where the
/// symbolic determinant is too large to expand comfortably).
pub fn expansion_matches_determinant_at_points(
    lbm: &LabeledBlockMatrix,
    seed: u64,
    points: usize,
) -> Result<bool> {
    use crate::hankel::MinorTable;
    use rand::Rng;
    use rand::SeedableRng;
    let table = MinorTable::maximal(lbm.backing.n, lbm.backing.r)?;
    let reg = table.registry().clone();
    let terms = lbm.expand()?;
    let realized = lbm.realize();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..points {
        let point: Vec<scalar::Scalar> = (0..reg.num_vars())
            .map(|_| scalar::from_int(rng.gen_range(-50..=50)))
            .collect();
        let mut minor_vals: BTreeMap<IndexSet, scalar::Scalar> = BTreeMap::new();
        for cols in table.column_sets() {
            let v = table.get(&cols)?.evaluate(&point)?;
            minor_vals.insert(cols, v);
        }
        let mut sum = scalar::zero();
        for t in &terms {
            let mut prod = scalar::from_int(t.sign as i64);
            for f in &t.factors {
                prod = &prod * &minor_vals[f];
            }
            sum = &sum + &prod;
        }
        let det = realized.evaluate(&point)?.determinant_value();
        if sum != det {
            return Ok(false);
        }
    }
    Ok(true)
}
