//! Linear syzygies and their consequences: Eagon–Northcott columns, exact
//! syzygy solving over the rationals, gradient-ideal sections, the explicit
//! linear-syzygy matrix of the polar map, the birationality criterion, and
//! the Rees fiber-type check.

use crate::error::Error;
use crate::fiber::{implicitization_kernel, kernel_via_elimination};
use crate::groebner::{
    buchberger, buchberger_driven, normal_form, Budget, Ideal, SugarWeights,
};
use crate::hankel::{build_section, HankelSpec, MinorTable};
use crate::hilbert::{hilbert_summary, HilbertSummary};
use crate::index_set::IndexSet;
use crate::laplace::f_lap;
use crate::linalg::QMatrix;
use crate::matrix::{DetStrategy, PolyMatrix, RankCertificate};
use crate::monomial::Monomial;
use crate::order::TermOrder;
use crate::plucker::plucker_relations;
use crate::poly::Polynomial;
use crate::scalar::{self, Scalar};
use crate::vars::{VarId, VariableRegistry};
use crate::Result;
use num::traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Columns of linear forms annihilating a fixed generator vector.
pub struct SyzygyMatrix {
    pub generators: Vec<Polynomial>,
    /// Column keys when the generators are minors (for labeling output).
    pub generator_keys: Option<Vec<IndexSet>>,
    pub matrix: PolyMatrix,
}

impl SyzygyMatrix {
    /// Exact check that every column annihilates the generator vector.
    pub fn annihilates(&self) -> Result<bool> {
        let reg = self.matrix.registry().clone();
        for c in 0..self.matrix.cols() {
            let mut acc = Polynomial::zero(&reg);
            for (i, g) in self.generators.iter().enumerate() {
                let e = self.matrix.get(i, c);
                if !e.is_zero() {
                    acc = acc.checked_add(&e.checked_mul(g)?)?;
                }
            }
            if !acc.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The Eagon–Northcott first syzygies of the maximal minors: for each
/// column choice `i_1 < … < i_{n+1}` and each row shift `k ∈ [n]`, the
/// alternating relation `Σ_j (-1)^{j+1} x_{i_j+k-1} [.. î_j ..] = 0`
/// (entries beyond the last surviving variable are zero).
pub fn en_syzygies(n: u32, r: u32) -> Result<SyzygyMatrix> {
    let table = MinorTable::maximal(n, r)?;
    let reg = table.registry().clone();
    let keys = table.column_sets();
    let index_of: BTreeMap<IndexSet, usize> = keys
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    let generators: Vec<Polynomial> = keys.iter().map(|k| table.get(k).cloned()).collect::<Result<_>>()?;
    let cutoff = table.spec.x_count();
    let mut columns: Vec<Vec<Polynomial>> = Vec::new();
    for subset in IndexSet::all_subsets(n + 2, (n + 1) as usize) {
        for k in 1..=n {
            let mut col = vec![Polynomial::zero(&reg); generators.len()];
            for (j, &ij) in subset.elems().iter().enumerate() {
                let deleted = subset.minus(&IndexSet::new(n + 2, vec![ij])?);
                let row = index_of[&deleted];
                let var_index = ij + k - 1;
                if var_index <= cutoff {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    let term = Polynomial::var(&reg, reg.x_var(var_index)?)
                        .scale(&scalar::from_int(sign));
                    col[row] = col[row].checked_add(&term)?;
                }
            }
            columns.push(col);
        }
    }
    let matrix = PolyMatrix::from_fn(&reg, generators.len(), columns.len(), |i, c| {
        columns[c][i].clone()
    });
    Ok(SyzygyMatrix {
        generators,
        generator_keys: Some(keys),
        matrix,
    })
}

/// All vectors of linear forms annihilating the given equal-degree
/// homogeneous generators, by exact linear algebra in degree d+1. The
/// returned columns are the reduced-echelon kernel basis.
pub fn linear_syzygy_basis(generators: &[Polynomial]) -> Result<SyzygyMatrix> {
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let reg = generators[0].registry().clone();
    let d = generators[0]
        .homogeneous_degree()
        .ok_or_else(|| Error::NotHomogeneous("syzygy generators".into()))?;
    for g in generators {
        if g.homogeneous_degree() != Some(d) || g.is_zero() {
            return Err(Error::NotHomogeneous(
                "generators must be nonzero of one degree".into(),
            ));
        }
    }
    let nvars = reg.num_vars();
    let m = generators.len();
    // unknown c_{j,i}: coefficient of x_i in the j-th entry
    let mut mono_index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new(); // column-major sparse
    for (j, g) in generators.iter().enumerate() {
        for i in 0..nvars {
            let xi = Polynomial::var(&reg, i);
            let prod = xi.checked_mul(g)?;
            let mut col = Vec::new();
            for (mono, c) in prod.terms() {
                let next = mono_index.len();
                let idx = *mono_index.entry(mono.clone()).or_insert(next);
                col.push((idx, c.clone()));
            }
            rows.push(col);
            let _ = j;
        }
    }
    let mut a = QMatrix::zeros(mono_index.len(), m * nvars as usize);
    for (cidx, col) in rows.iter().enumerate() {
        for (ridx, c) in col {
            a.set(*ridx, cidx, c.clone());
        }
    }
    let kernel = a.kernel_basis();
    let matrix = PolyMatrix::from_fn(&reg, m, kernel.len(), |j, s| {
        let mut p = Polynomial::zero(&reg);
        for i in 0..nvars as usize {
            let c = &kernel[s][j * nvars as usize + i];
            if !c.is_zero() {
                p.add_term(Monomial::var(i as VarId), c.clone());
            }
        }
        p
    });
    Ok(SyzygyMatrix {
        generators: generators.to_vec(),
        generator_keys: None,
        matrix,
    })
}

/// Is a column (vector of linear forms) inside the span of the basis
/// columns? Decided exactly on stacked coefficient vectors.
pub fn column_in_span(basis: &SyzygyMatrix, column: &[Polynomial]) -> Result<bool> {
    let reg = basis.matrix.registry().clone();
    let nvars = reg.num_vars() as usize;
    let m = basis.generators.len();
    if column.len() != m {
        return Err(Error::CardinalityMismatch);
    }
    let flat = |col: &dyn Fn(usize) -> Polynomial| -> Vec<Scalar> {
        let mut v = vec![scalar::zero(); m * nvars];
        for j in 0..m {
            let p = col(j);
            for (mono, c) in p.terms() {
                let var = mono.vars().next().expect("linear form");
                v[j * nvars + var as usize] = c.clone();
            }
        }
        v
    };
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for s in 0..basis.matrix.cols() {
        rows.push(flat(&|j| basis.matrix.get(j, s).clone()));
    }
    let a = QMatrix::from_rows(rows);
    let b = QMatrix::from_rows(vec![flat(&|j| column[j].clone())]);
    Ok(crate::linalg::same_row_span(&a, &a.stack(&b)))
}

/// The gradient section `J[r]`: partial derivatives of `det(H_{n+1,n+1})`
/// with the last `r` variables then set to zero. The raw list keeps zero
/// entries (positions matter); the ideal drops them.
pub struct GradientSection {
    pub partials: Vec<Polynomial>,
    pub ideal: Ideal,
}

pub fn gradient_section(n: u32, r: u32) -> Result<GradientSection> {
    if n < 2 || r > n - 1 {
        return Err(Error::InvalidConfig(format!("bad (n, r) = ({n}, {r})")));
    }
    let full = HankelSpec::square(n, 0)?;
    let matrix = build_section(&full);
    let det = matrix.determinant(DetStrategy::CofactorMemo)?;
    let small_reg = VariableRegistry::x_only(2 * n + 1 - r);
    let mut assignment = BTreeMap::new();
    for i in 0..(2 * n + 1) {
        let img = if i < 2 * n + 1 - r {
            Polynomial::var(&small_reg, i)
        } else {
            Polynomial::zero(&small_reg)
        };
        assignment.insert(i as VarId, img);
    }
    let mut partials = Vec::with_capacity((2 * n + 1) as usize);
    for v in 0..(2 * n + 1) {
        let d = det.differentiate(v);
        partials.push(d.substitute(&assignment, &small_reg)?);
    }
    let ideal = Ideal::labeled(
        &small_reg,
        partials.clone(),
        &format!("gradient section J[{r}] of det H_{{{}}}", n + 1),
    );
    Ok(GradientSection { partials, ideal })
}

/// Row `i`, column `c` of the explicit linear-syzygy matrix of the polar
/// map at the maximal degeneration: entries follow `x_{i+c-1}` with the
/// displayed integer coefficients; zero past the last variable.
fn linsyz_entry(n: u32, i: u32, c: u32, reg: &Arc<VariableRegistry>) -> Result<Polynomial> {
    let var_index = i + c - 1;
    if var_index > n + 2 {
        return Ok(Polynomial::zero(reg));
    }
    let coeff: i64 = if c == 1 {
        if i <= n + 1 {
            (n + 1 - i) as i64
        } else {
            -1
        }
    } else {
        2 * n as i64 + 5 - 2 * c as i64 - i as i64
    };
    if coeff == 0 {
        return Ok(Polynomial::zero(reg));
    }
    Ok(Polynomial::var(reg, reg.x_var(var_index)?).scale(&scalar::from_int(coeff)))
}

pub fn linsyz_matrix(n: u32) -> Result<PolyMatrix> {
    if n < 2 {
        return Err(Error::InvalidConfig("n must be >= 2".into()));
    }
    let reg = VariableRegistry::x_only(n + 2);
    let rows = (n + 2) as usize;
    let cols = (n + 1) as usize;
    let mut m = PolyMatrix::zeros(&reg, rows, cols);
    for i in 1..=(n + 2) {
        for c in 1..=(n + 1) {
            m.set(
                (i - 1) as usize,
                (c - 1) as usize,
                linsyz_entry(n, i, c, &reg)?,
            );
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct LinSyzReport {
    pub n: u32,
    pub product_zero: bool,
    pub rank: usize,
    pub expected_rank: usize,
}

/// Builds the template, checks `(∇ det H[n-1])ᵀ · M = 0` symbolically, and
/// that the generic rank is exactly n+1.
pub fn verify_linsyz(n: u32, seed: u64) -> Result<LinSyzReport> {
    let m = linsyz_matrix(n)?;
    let reg = m.registry().clone();
    let square = build_section(&HankelSpec::square(n, n - 1)?);
    debug_assert!(VariableRegistry::same(square.registry(), &reg));
    let f = square.determinant(DetStrategy::CofactorMemo)?;
    let mut product_zero = true;
    for c in 0..m.cols() {
        let mut acc = Polynomial::zero(&reg);
        for i in 0..m.rows() {
            let e = m.get(i, c);
            if !e.is_zero() {
                acc = acc.checked_add(&e.checked_mul(&f.differentiate(i as VarId))?)?;
            }
        }
        if !acc.is_zero() {
            product_zero = false;
            break;
        }
    }
    let rank = m.rank_generic(seed, true)?.rank;
    Ok(LinSyzReport {
        n,
        product_zero,
        rank,
        expected_rank: (n + 1) as usize,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum BirationalityVerdict {
    #[serde(rename = "birational-certified")]
    BirationalCertified,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Serialize)]
pub struct BirationalityReport {
    pub analytic_spread: u32,
    pub ambient_dim: u32,
    pub linear_syzygy_rank: usize,
    pub verdict: BirationalityVerdict,
    #[serde(skip)]
    pub certificate: Option<RankCertificate>,
}

/// The rank criterion: with maximal analytic spread and linear-syzygy rank
/// at least `ambient - 1`, the associated rational map is birational onto
/// its image.
pub fn birationality_check(
    generators: &[Polynomial],
    ambient_dim: u32,
    fiber_dim: u32,
    seed: u64,
) -> Result<BirationalityReport> {
    let m1 = linear_syzygy_basis(generators)?;
    let est = m1.matrix.rank_generic(seed, true)?;
    let verdict = if fiber_dim == ambient_dim && est.rank + 1 >= ambient_dim as usize {
        BirationalityVerdict::BirationalCertified
    } else {
        BirationalityVerdict::Inconclusive
    };
    Ok(BirationalityReport {
        analytic_spread: fiber_dim,
        ambient_dim,
        linear_syzygy_rank: est.rank,
        verdict,
        certificate: est.certificate,
    })
}

/// Multiplicity of the special fiber of the maximal-degeneration gradient
/// section, through the exact kernel of its generator table.
pub fn reduction_fiber_multiplicity(n: u32, budget: &Budget) -> Result<(i64, HilbertSummary)> {
    let gs = gradient_section(n, n - 1)?;
    let gens: Vec<Polynomial> = gs
        .partials
        .iter()
        .filter(|p| !p.is_zero())
        .cloned()
        .collect();
    let m = gens.len() as u32;
    let sets: Vec<IndexSet> = (1..=m)
        .map(|k| IndexSet::new(m, vec![k]))
        .collect::<Result<_>>()?;
    let kernel = implicitization_kernel(&gens, sets, budget)?;
    let hs = hilbert_summary(&kernel.gb, true)?;
    Ok((hs.multiplicity, hs))
}

/// A bihomogeneous generator of the Rees defining ideal with its
/// `(x-degree, T-degree)`.
#[derive(Clone, Serialize)]
pub struct BigradedGenerator {
    #[serde(serialize_with = "crate::report::serialize_poly")]
    pub poly: Polynomial,
    pub x_degree: u32,
    pub t_degree: u32,
}

#[derive(Serialize)]
pub struct ReesReport {
    pub n: u32,
    /// `None` when the budget ran out before the answer was determined.
    pub fiber_type: Option<bool>,
    pub generators: Vec<BigradedGenerator>,
    /// Do Eagon–Northcott + Plücker + f_lap generate the whole Rees ideal?
    pub candidate_match: Option<bool>,
    /// Do the T-only generators cut out the same ideal as the fiber kernel?
    pub fiber_part_matches_kernel: Option<bool>,
}

/// Eliminates `t` from `(T_i - [i] t)`, extracts minimal bihomogeneous
/// generators, and decides fiber type: every generator of bidegree `(0,*)`
/// or `(*,1)`.
pub fn rees_fiber_type_check(n: u32, budget: &Budget) -> Result<ReesReport> {
    match rees_fiber_type_inner(n, budget) {
        Ok(report) => Ok(report),
        Err(Error::BudgetExceeded(_)) => Ok(ReesReport {
            n,
            fiber_type: None,
            generators: Vec::new(),
            candidate_match: None,
            fiber_part_matches_kernel: None,
        }),
        Err(e) => Err(e),
    }
}

fn rees_fiber_type_inner(n: u32, budget: &Budget) -> Result<ReesReport> {
    let table = MinorTable::maximal(n, 1)?;
    let sets = table.column_sets();
    let x_count = 2 * n; // S_1 has 2n+1-1 ground variables
    let t_var_id = x_count; // the Rees parameter rides along as one extra ground variable
    let joint = VariableRegistry::new(x_count + 1, sets.clone())?;
    let mut graph_gens = Vec::new();
    for s in &sets {
        let minor = table.get(s)?.map_registry(&joint, Ok)?;
        let t = Polynomial::var(&joint, t_var_id);
        let big_t = Polynomial::var(&joint, joint.t_var(s)?);
        graph_gens.push(big_t.checked_sub(&minor.checked_mul(&t)?)?);
    }
    let ideal = Ideal::labeled(&joint, graph_gens, &format!("rees graph n={n}"));
    let order = TermOrder::eliminate(&[t_var_id]);
    let weights = SugarWeights::for_registry(&joint, n + 1);
    let gb = buchberger_driven(&ideal, &order, budget, &weights, Some(x_count + 1));
    if !gb.complete {
        return Err(Error::BudgetExceeded("rees elimination".into()));
    }
    // keep the t-free part, rebased to the bigraded x,T registry
    let rees_reg = VariableRegistry::new(x_count, sets.clone())?;
    let mut rees_gens: Vec<Polynomial> = Vec::new();
    for e in &gb.elements {
        if e.terms().all(|(m, _)| m.exponent(t_var_id) == 0) {
            rees_gens.push(e.map_registry(&rees_reg, |v| {
                if v < x_count {
                    Ok(v)
                } else if let Some(set) = joint.t_set(v) {
                    rees_reg.t_var(set)
                } else {
                    Err(Error::ForeignVariable(joint.label(v)))
                }
            })?);
        }
    }
    // minimal generators: accept ascending by total degree when not already
    // generated by what was kept
    let mut ordered = rees_gens.clone();
    ordered.sort_by_key(|p| (p.degree().unwrap_or(0), format!("{p}")));
    let mut kept: Vec<Polynomial> = Vec::new();
    for g in ordered {
        let redundant = if kept.is_empty() {
            false
        } else {
            let gb_kept = buchberger(&Ideal::new(&rees_reg, kept.clone()), &TermOrder::grevlex(), budget);
            if !gb_kept.complete {
                return Err(Error::BudgetExceeded("minimal generator filtering".into()));
            }
            normal_form(&g, &gb_kept)?.is_zero()
        };
        if !redundant {
            kept.push(g);
        }
    }
    let generators: Vec<BigradedGenerator> = kept
        .iter()
        .map(|p| {
            let (x_degree, t_degree) = p.bidegree().ok_or_else(|| {
                Error::NotHomogeneous(format!("rees generator not bihomogeneous: {p}"))
            })?;
            Ok(BigradedGenerator {
                poly: p.clone(),
                x_degree,
                t_degree,
            })
        })
        .collect::<Result<_>>()?;
    let fiber_type = generators
        .iter()
        .all(|g| g.x_degree == 0 || g.t_degree == 1);

    // candidate comparison: EN syzygies + Plücker + f_lap in the x,T ring
    let rees_ideal = Ideal::labeled(&rees_reg, rees_gens.clone(), "rees ideal");
    let rees_gb = buchberger(&rees_ideal, &TermOrder::grevlex(), budget);
    let en = en_syzygies(n, 1)?;
    let mut cand_gens: Vec<Polynomial> = Vec::new();
    for c in 0..en.matrix.cols() {
        let mut p = Polynomial::zero(&rees_reg);
        for (row, key) in en.generator_keys.as_ref().expect("minor keys").iter().enumerate() {
            let entry = en.matrix.get(row, c);
            if !entry.is_zero() {
                let lifted = entry.map_registry(&rees_reg, Ok)?;
                let t = Polynomial::var(&rees_reg, rees_reg.t_var(key)?);
                p = p.checked_add(&lifted.checked_mul(&t)?)?;
            }
        }
        cand_gens.push(p);
    }
    let (t_only_reg, plu) = plucker_relations(n)?;
    let lift_t = |p: &Polynomial| -> Result<Polynomial> {
        p.map_registry(&rees_reg, |v| {
            let set = t_only_reg
                .t_set(v)
                .ok_or_else(|| Error::ForeignVariable(t_only_reg.label(v)))?;
            rees_reg.t_var(set)
        })
    };
    for p in &plu {
        cand_gens.push(lift_t(p)?);
    }
    cand_gens.push(lift_t(&f_lap(&t_only_reg, n)?)?);
    let cand_ideal = Ideal::labeled(&rees_reg, cand_gens, "EN + plucker + f_lap");
    let cand_gb = buchberger(&cand_ideal, &TermOrder::grevlex(), budget);
    let candidate_match = if rees_gb.complete && cand_gb.complete {
        Some(crate::groebner::ideals_equal(
            &rees_ideal,
            &rees_gb,
            &cand_ideal,
            &cand_gb,
        )?)
    } else {
        None
    };

    // fiber-part comparison with the exact kernel
    let fiber_part: Vec<Polynomial> = kept
        .iter()
        .filter(|p| p.bidegree().map(|(dx, _)| dx == 0).unwrap_or(false))
        .cloned()
        .collect();
    let fiber_part_matches_kernel = {
        let t_reg = VariableRegistry::t_only(sets.clone())?;
        let drop_x = |p: &Polynomial| -> Result<Polynomial> {
            p.map_registry(&t_reg, |v| {
                rees_reg
                    .t_set(v)
                    .map(|s| t_reg.t_var(s))
                    .transpose()?
                    .ok_or_else(|| Error::ForeignVariable(rees_reg.label(v)))
            })
        };
        let fiber_ideal = Ideal::new(
            &t_reg,
            fiber_part
                .iter()
                .map(|p| drop_x(p))
                .collect::<Result<Vec<_>>>()?,
        );
        let fiber_gb = buchberger(&fiber_ideal, &TermOrder::grevlex(), budget);
        let kernel = kernel_via_elimination(&table, budget)?;
        if fiber_gb.complete {
            Some(crate::groebner::ideals_equal(
                &fiber_ideal,
                &fiber_gb,
                &kernel.ideal,
                &kernel.gb,
            )?)
        } else {
            None
        }
    };

    Ok(ReesReport {
        n,
        fiber_type: Some(fiber_type),
        generators,
        candidate_match,
        fiber_part_matches_kernel,
    })
}

/// ψ-image sanity for candidate Rees generators: used by tests to pin the
/// bigraded inventory.
pub fn bidegree_inventory(gens: &[BigradedGenerator]) -> BTreeMap<(u32, u32), usize> {
    let mut map = BTreeMap::new();
    for g in gens {
        *map.entry((g.x_degree, g.t_degree)).or_insert(0) += 1;
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    #[test]
    fn en_classical_identity_n2() {
        // columns {1,2,3}, k=1: x1[2,3] - x2[1,3] + x3[1,2] = 0
        let syz = en_syzygies(2, 1).unwrap();
        assert!(syz.annihilates().unwrap());
        assert_eq!(syz.matrix.cols(), 2 * 4); // n(n+2) = 8
    }

    #[test]
    fn en_columns_annihilate_n3() {
        for r in 0..=2u32 {
            let syz = en_syzygies(3, r).unwrap();
            assert_eq!(syz.matrix.cols(), 15); // n(n+2)
            assert!(syz.annihilates().unwrap(), "EN annihilation n=3 r={r}");
        }
    }

    #[test]
    fn coprime_squares_have_no_linear_syzygies() {
        let reg = VariableRegistry::x_only(2);
        let gens = vec![
            parse_polynomial(&reg, "x1^2").unwrap(),
            parse_polynomial(&reg, "x2^2").unwrap(),
        ];
        let syz = linear_syzygy_basis(&gens).unwrap();
        assert_eq!(syz.matrix.cols(), 0);
    }

    #[test]
    fn minor_syzygies_have_corank_one_n3() {
        for r in [1u32, 2] {
            let table = MinorTable::maximal(3, r).unwrap();
            let keys = table.column_sets();
            let gens: Vec<Polynomial> =
                keys.iter().map(|k| table.get(k).unwrap().clone()).collect();
            let syz = linear_syzygy_basis(&gens).unwrap();
            assert!(syz.annihilates().unwrap());
            let rank = syz.matrix.rank_generic(42, true).unwrap();
            assert_eq!(rank.rank, 9, "C(5,2)-1 for n=3, r={r}");
        }
    }

    #[test]
    fn en_columns_inside_syzygy_span_n3_r1() {
        let en = en_syzygies(3, 1).unwrap();
        let basis = linear_syzygy_basis(&en.generators).unwrap();
        for c in 0..en.matrix.cols() {
            let col: Vec<Polynomial> = (0..en.matrix.rows())
                .map(|i| en.matrix.get(i, c).clone())
                .collect();
            assert!(column_in_span(&basis, &col).unwrap(), "column {c}");
        }
    }

    #[test]
    fn gradient_partials_and_euler() {
        let gs = gradient_section(2, 0).unwrap();
        let reg = gs.ideal.registry().clone();
        // ∂F/∂x5 of the 3x3 Hankel determinant
        assert_eq!(
            gs.partials[4],
            parse_polynomial(&reg, "x1*x3 - x2^2").unwrap()
        );
        // Euler: Σ x_i ∂F/∂x_i = (n+1) F before specialization
        let full = build_section(&HankelSpec::square(2, 0).unwrap());
        let f = full.determinant(DetStrategy::CofactorMemo).unwrap();
        let mut acc = Polynomial::zero(full.registry());
        for v in 0..5u32 {
            acc = acc
                .checked_add(
                    &Polynomial::var(full.registry(), v).checked_mul(&f.differentiate(v)).unwrap(),
                )
                .unwrap();
        }
        assert_eq!(acc, f.scale(&scalar::from_int(3)));
    }

    #[test]
    fn linsyz_product_and_rank_small() {
        for n in [2u32, 3] {
            let rep = verify_linsyz(n, 42).unwrap();
            assert!(rep.product_zero, "gradient annihilation at n={n}");
            assert_eq!(rep.rank, (n + 1) as usize);
        }
    }

    #[test]
    fn linsyz_n2_lower_triangle_after_deleting_first_row() {
        let m = linsyz_matrix(2).unwrap();
        // rows 2..4 of the 4x3 template: zero above the anti-diagonal,
        // nonzero on it
        for i in 2..=4u32 {
            for c in 1..=3u32 {
                let e = m.get((i - 1) as usize, (c - 1) as usize);
                if c > 5 - i {
                    assert!(e.is_zero(), "({i},{c}) should vanish");
                } else if c == 5 - i {
                    assert!(!e.is_zero(), "anti-diagonal ({i},{c}) nonzero");
                }
            }
        }
    }

    #[test]
    fn birationality_on_minors_n3() {
        for r in [1u32, 2] {
            let table = MinorTable::maximal(3, r).unwrap();
            let keys = table.column_sets();
            let gens: Vec<Polynomial> =
                keys.iter().map(|k| table.get(k).unwrap().clone()).collect();
            let ambient = 2 * 3 + 1 - r;
            let report = birationality_check(&gens, ambient, ambient, 42).unwrap();
            assert_eq!(report.verdict, BirationalityVerdict::BirationalCertified);
        }
    }

    #[test]
    fn birationality_inconclusive_for_coprime_squares() {
        let reg = VariableRegistry::x_only(2);
        let gens = vec![
            parse_polynomial(&reg, "x1^2").unwrap(),
            parse_polynomial(&reg, "x2^2").unwrap(),
        ];
        let report = birationality_check(&gens, 2, 2, 42).unwrap();
        assert_eq!(report.verdict, BirationalityVerdict::Inconclusive);
        assert_eq!(report.linear_syzygy_rank, 0);
    }

    #[test]
    fn reduction_multiplicity_n2() {
        let (e, hs) = reduction_fiber_multiplicity(2, &Budget::default()).unwrap();
        assert_eq!(e, 4); // 2^{n+1} - n - 2
        assert_eq!(hs.krull_dim, 4); // n + 2
    }

    #[test]
    fn rees_fiber_type_n2() {
        let report = rees_fiber_type_check(2, &Budget::default()).unwrap();
        assert_eq!(report.fiber_type, Some(true));
        assert_eq!(report.candidate_match, Some(true));
        assert_eq!(report.fiber_part_matches_kernel, Some(true));
        let inv = bidegree_inventory(&report.generators);
        let expected: BTreeMap<(u32, u32), usize> =
            [((0, 2), 2), ((1, 1), 8)].into_iter().collect();
        assert_eq!(inv, expected);
    }

    #[test]
    fn rees_budget_yields_not_determined() {
        let report = rees_fiber_type_check(
            2,
            &Budget {
                max_pairs: 1,
                max_seconds: 600,
            },
        )
        .unwrap();
        assert_eq!(report.fiber_type, None);
    }
}
