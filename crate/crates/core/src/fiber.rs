//! Special-fiber verification: the substitution `T_i ↦ [i]`, candidate
//! defining ideals per degeneration level, fiber invariant reports, and the
//! exact kernel computation by block elimination.

use crate::error::Error;
use crate::groebner::{buchberger, buchberger_driven, Budget, GbStats, GroebnerBasis, Ideal, SugarWeights};
use crate::hankel::MinorTable;
use crate::hilbert::{hilbert_summary, HilbertSummary};
use crate::index_set::IndexSet;
use crate::laplace::{all_lap_polynomials, f_lap};
use crate::order::TermOrder;
use crate::plucker::{plucker_relations, PosetIso};
use crate::poly::Polynomial;
use crate::scalar::binomial;
use crate::vars::{VarId, VariableRegistry};
use crate::Result;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Applies `T_i ↦ [i]`: the image is zero exactly when the polynomial lies
/// in the kernel of the presentation of the fiber ring.
pub fn psi_substitute(p: &Polynomial, table: &MinorTable) -> Result<Polynomial> {
    let target = table.registry().clone();
    let reg = p.registry();
    let mut assignment: BTreeMap<VarId, Polynomial> = BTreeMap::new();
    let mut vars: Vec<VarId> = Vec::new();
    for (m, _) in p.terms() {
        vars.extend(m.vars());
    }
    vars.sort_unstable();
    vars.dedup();
    for v in vars {
        let set = reg
            .t_set(v)
            .ok_or_else(|| Error::ForeignVariable(reg.label(v)))?;
        let minor = table.get(set)?;
        assignment.insert(v, minor.clone());
    }
    p.substitute(&assignment, &target)
}

/// Closed-form expectations for the fiber invariants at the degenerations
/// the relation families cover.
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct FiberExpectations {
    pub dim: u32,
    pub multiplicity: i64,
    pub h_degree: u32,
    pub a_invariant: i64,
}

pub fn expected_fiber(n: u32, r: u32) -> Option<FiberExpectations> {
    if n < 2 || r > n - 1 {
        return None;
    }
    let dim = 2 * n - r + 1;
    let c2n = binomial(2 * n as u64, n as u64) as i64;
    if r == n - 1 {
        let h = (n + 2) / 2;
        Some(FiberExpectations {
            dim,
            multiplicity: (1i64 << (n + 1)) - n as i64 - 2,
            h_degree: h,
            a_invariant: h as i64 - (n as i64 + 2),
        })
    } else if r == 1 {
        Some(FiberExpectations {
            dim,
            multiplicity: n as i64 * c2n / (n as i64 + 1),
            h_degree: 2 * n - 2,
            a_invariant: -2,
        })
    } else if r == 0 {
        Some(FiberExpectations {
            dim,
            multiplicity: c2n / (n as i64 + 1),
            h_degree: n - 1,
            a_invariant: -(n as i64 + 2),
        })
    } else {
        None
    }
}

/// The candidate generating set of the fiber's defining ideal: Plücker
/// relations always; all Laplace quadrics at the maximal degeneration; the
/// single degree-n staircase relation at r = 1.
pub fn candidate_ideal(n: u32, r: u32) -> Result<(Arc<VariableRegistry>, Ideal)> {
    let (reg, mut gens) = plucker_relations(n)?;
    let label;
    if r == n - 1 {
        for (_, lap) in all_lap_polynomials(&reg, n)? {
            gens.push(lap);
        }
        label = format!("plucker+laplace n={n}");
    } else if r == 1 {
        gens.push(f_lap(&reg, n)?);
        label = format!("plucker+f_lap n={n}");
    } else if r == 0 {
        label = format!("plucker n={n}");
    } else {
        return Err(Error::InvalidConfig(format!(
            "no candidate generators for r={r} (only 0, 1, n-1)"
        )));
    }
    Ok((reg.clone(), Ideal::labeled(&reg, gens, &label)))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CheckOutcome {
    pub expected: i64,
    pub actual: i64,
    pub ok: bool,
}

fn check(expected: i64, actual: i64) -> CheckOutcome {
    CheckOutcome {
        expected,
        actual,
        ok: expected == actual,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberChecks {
    pub dim: CheckOutcome,
    pub multiplicity: CheckOutcome,
    pub h_degree: CheckOutcome,
    /// Conditional on Cohen-Macaulayness, which the fiber rings here have.
    pub a_invariant: CheckOutcome,
    pub psi_vanishing: bool,
}

impl FiberChecks {
    pub fn all_ok(&self) -> bool {
        self.dim.ok
            && self.multiplicity.ok
            && self.h_degree.ok
            && self.a_invariant.ok
            && self.psi_vanishing
    }
}

/// Everything the suite reports about one special fiber.
#[derive(Clone, Debug, Serialize)]
pub struct FiberSummary {
    pub n: u32,
    pub r: u32,
    pub generator_inventory: BTreeMap<u32, usize>,
    pub hilbert: HilbertSummary,
    /// Regularity reading of the h-degree, valid since the ring is CM.
    pub regularity_cm: u32,
    pub gb_size: usize,
    pub gb_stats: GbStats,
    pub checks: FiberChecks,
}

/// Builds the candidate ideal, runs the engine, and verifies dimension,
/// multiplicity, h-degree and a-invariant against the closed forms, plus
/// the ψ-vanishing of every generator.
pub fn fiber_report(n: u32, r: u32, budget: &Budget) -> Result<FiberSummary> {
    let (_reg, ideal) = candidate_ideal(n, r)?;
    let expected = expected_fiber(n, r).ok_or_else(|| {
        Error::InvalidConfig(format!("no closed-form expectations for n={n}, r={r}"))
    })?;
    let gb = buchberger(&ideal, &TermOrder::grevlex(), budget);
    if !gb.complete {
        return Err(Error::BudgetExceeded(format!(
            "fiber basis for n={n}, r={r} (pairs={})",
            gb.stats.pairs_processed
        )));
    }
    let hs = hilbert_summary(&gb, true)?;
    let table = MinorTable::maximal(n, r)?;
    let mut psi_ok = true;
    for g in ideal.generators() {
        if !psi_substitute(g, &table)?.is_zero() {
            psi_ok = false;
            break;
        }
    }
    let checks = FiberChecks {
        dim: check(expected.dim as i64, hs.krull_dim as i64),
        multiplicity: check(expected.multiplicity, hs.multiplicity),
        h_degree: check(expected.h_degree as i64, hs.h_degree as i64),
        a_invariant: check(expected.a_invariant, hs.a_invariant),
        psi_vanishing: psi_ok,
    };
    Ok(FiberSummary {
        n,
        r,
        generator_inventory: ideal.degree_inventory(),
        regularity_cm: hs.h_degree,
        hilbert: hs,
        gb_size: gb.elements.len(),
        gb_stats: gb.stats,
        checks,
    })
}

/// Result of an exact kernel computation: a generating set of `ker ψ` in
/// the pure T-ring, together with its reduced grevlex basis.
pub struct KernelResult {
    pub ideal: Ideal,
    pub gb: GroebnerBasis,
    pub elimination_stats: GbStats,
}

/// Kernel of `x_vars ⟼ themselves, T_k ⟼ g_k` by block elimination with
/// the ground block first; the T-only part of the reduced basis generates
/// the kernel exactly.
pub fn implicitization_kernel(
    gens: &[Polynomial],
    t_sets: Vec<IndexSet>,
    budget: &Budget,
) -> Result<KernelResult> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let x_reg = gens[0].registry().clone();
    let x_count = x_reg.x_count();
    if gens.len() != t_sets.len() {
        return Err(Error::CardinalityMismatch);
    }
    let joint = VariableRegistry::new(x_count, t_sets.clone())?;
    let mut graph_gens = Vec::with_capacity(gens.len());
    for (g, set) in gens.iter().zip(&t_sets) {
        let lifted = g.map_registry(&joint, Ok)?;
        let t = Polynomial::var(&joint, joint.t_var(set)?);
        graph_gens.push(t.checked_sub(&lifted)?);
    }
    let ideal = Ideal::new(&joint, graph_gens);
    let x_block: Vec<VarId> = (0..x_count).collect();
    let order = TermOrder::eliminate(&x_block);
    // the graph ideal is homogeneous once T-variables weigh as much as the
    // forms they tag; exact sugar keeps the run degree-by-degree
    let t_weight = gens
        .iter()
        .filter_map(|g| g.degree())
        .max()
        .unwrap_or(1);
    let weights = SugarWeights::for_registry(&joint, t_weight);
    // the graph quotient is K[x]: its Hilbert function drives the pruning
    let gb = buchberger_driven(&ideal, &order, budget, &weights, Some(x_count));
    if !gb.complete {
        return Err(Error::BudgetExceeded(format!(
            "elimination run (pairs={})",
            gb.stats.pairs_processed
        )));
    }
    let t_reg = VariableRegistry::t_only(t_sets)?;
    let mut kernel_gens = Vec::new();
    for e in &gb.elements {
        let t_free = e
            .terms()
            .all(|(m, _)| m.vars().all(|v| joint.is_t(v)));
        if t_free {
            let mapped = e.map_registry(&t_reg, |v| {
                let set = joint
                    .t_set(v)
                    .ok_or_else(|| Error::ForeignVariable(joint.label(v)))?;
                t_reg.t_var(set)
            })?;
            kernel_gens.push(mapped);
        }
    }
    let kernel_ideal = Ideal::new(&t_reg, kernel_gens);
    let kernel_gb = buchberger(&kernel_ideal, &TermOrder::grevlex(), budget);
    if !kernel_gb.complete {
        return Err(Error::BudgetExceeded("kernel re-reduction".into()));
    }
    Ok(KernelResult {
        ideal: kernel_ideal,
        gb: kernel_gb,
        elimination_stats: gb.stats,
    })
}

/// Exact generating set of `ker ψ` for a maximal-minor table.
pub fn kernel_via_elimination(table: &MinorTable, budget: &Budget) -> Result<KernelResult> {
    let sets = table.column_sets();
    let mut gens = Vec::with_capacity(sets.len());
    for s in &sets {
        gens.push(table.get(s)?.clone());
    }
    implicitization_kernel(&gens, sets, budget)
}

/// Certifies `kernel == candidate` by two-sided normal-form vanishing.
pub fn kernel_matches_candidate(
    kernel: &KernelResult,
    n: u32,
    r: u32,
    budget: &Budget,
) -> Result<bool> {
    let (_reg, cand) = candidate_ideal(n, r)?;
    let cand_gb = buchberger(&cand, &TermOrder::grevlex(), budget);
    if !cand_gb.complete {
        return Err(Error::BudgetExceeded("candidate basis".into()));
    }
    crate::groebner::ideals_equal(&kernel.ideal, &kernel.gb, &cand, &cand_gb)
}

/// One tried order in the exploratory search for a quadratic basis.
#[derive(Clone, Debug, Serialize)]
pub struct KoszulTrial {
    pub name: String,
    pub complete: bool,
    pub basis_size: usize,
    pub max_degree: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct KoszulSearchOutcome {
    pub n: u32,
    pub trials: Vec<KoszulTrial>,
    pub quadratic_order: Option<String>,
}

/// Tries a handful of grevlex orders pulled back through the duality
/// isomorphism and records whether any of them yields a basis of maximal
/// degree 2 for the Plücker+Laplace ideal. Recorded, never asserted.
pub fn koszul_order_search(n: u32, budget: &Budget) -> Result<KoszulSearchOutcome> {
    let (reg, ideal) = candidate_ideal(n, n - 1)?;
    let iso = PosetIso::new(n)?;
    let key_of = |v: VarId| -> (u32, u32) {
        let img = iso.image_set(reg.t_set(v).expect("T registry"));
        (img.elems()[0], img.elems()[1])
    };
    let vars: Vec<VarId> = (0..reg.num_vars()).collect();
    let mut orders: Vec<(String, TermOrder)> = vec![(
        "grevlex-default".into(),
        TermOrder::grevlex(),
    )];
    let mut by = |name: &str, keyfn: Box<dyn Fn(VarId) -> (u32, u32)>| {
        let mut vs = vars.clone();
        vs.sort_by_key(|&v| keyfn(v));
        orders.push((name.into(), TermOrder::grevlex_permuted(vs)));
    };
    by("grevlex-phi-lex", Box::new(key_of));
    by(
        "grevlex-phi-lex-desc",
        Box::new(move |v| {
            let (a, b) = key_of(v);
            (u32::MAX - a, u32::MAX - b)
        }),
    );
    by(
        "grevlex-phi-colex",
        Box::new(move |v| {
            let (a, b) = key_of(v);
            (b, a)
        }),
    );
    by(
        "grevlex-phi-antidiagonal",
        Box::new(move |v| {
            let (a, b) = key_of(v);
            (a + b, a)
        }),
    );
    let mut trials = Vec::new();
    let mut quadratic_order = None;
    for (name, order) in orders {
        let gb = buchberger(&ideal, &order, budget);
        let max_degree = gb.max_element_degree();
        if gb.complete && max_degree <= 2 && quadratic_order.is_none() {
            quadratic_order = Some(name.clone());
        }
        trials.push(KoszulTrial {
            name,
            complete: gb.complete,
            basis_size: gb.elements.len(),
            max_degree,
        });
    }
    Ok(KoszulSearchOutcome {
        n,
        trials,
        quadratic_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::normal_form;
    use crate::parse::parse_polynomial;

    #[test]
    fn psi_sends_t12_to_its_minor() {
        let table = MinorTable::maximal(2, 1).unwrap();
        let (reg, _) = plucker_relations(2).unwrap();
        let t12 = Polynomial::var(&reg, reg.t_var(&IndexSet::new(4, vec![1, 2]).unwrap()).unwrap());
        let img = psi_substitute(&t12, &table).unwrap();
        assert_eq!(
            img,
            parse_polynomial(table.registry(), "x1*x3 - x2^2").unwrap()
        );
    }

    #[test]
    fn plucker_vanishes_under_psi_all_r_n3() {
        for r in 0..=2u32 {
            let table = MinorTable::maximal(3, r).unwrap();
            let (_, rels) = plucker_relations(3).unwrap();
            for rel in &rels {
                assert!(
                    psi_substitute(rel, &table).unwrap().is_zero(),
                    "Plücker image should vanish at r={r}"
                );
            }
        }
    }

    #[test]
    fn lap_vanishes_under_psi_max_degeneration() {
        for n in [2u32, 3] {
            let table = MinorTable::maximal(n, n - 1).unwrap();
            let (reg, _) = plucker_relations(n).unwrap();
            for (_, lap) in all_lap_polynomials(&reg, n).unwrap() {
                assert!(psi_substitute(&lap, &table).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn f_lap_vanishes_under_psi_r1() {
        for n in [2u32, 3] {
            let table = MinorTable::maximal(n, 1).unwrap();
            let (reg, _) = plucker_relations(n).unwrap();
            let f = f_lap(&reg, n).unwrap();
            assert!(psi_substitute(&f, &table).unwrap().is_zero());
        }
    }

    #[test]
    fn expected_values_instantiate() {
        // (n=3, r=2): dim 5, e 11, h 2, a -3
        assert_eq!(
            expected_fiber(3, 2).unwrap(),
            FiberExpectations {
                dim: 5,
                multiplicity: 11,
                h_degree: 2,
                a_invariant: -3
            }
        );
        // (n=3, r=1): dim 6, e 15, h 4, a -2
        assert_eq!(
            expected_fiber(3, 1).unwrap(),
            FiberExpectations {
                dim: 6,
                multiplicity: 15,
                h_degree: 4,
                a_invariant: -2
            }
        );
        // (n=4, r=3): dim 6, e 26, h 3, a -3
        assert_eq!(
            expected_fiber(4, 3).unwrap(),
            FiberExpectations {
                dim: 6,
                multiplicity: 26,
                h_degree: 3,
                a_invariant: -3
            }
        );
        // both formulas agree at n=2, r=1=n-1
        assert_eq!(expected_fiber(2, 1).unwrap().multiplicity, 4);
    }

    #[test]
    fn fiber_report_n2() {
        for r in [0u32, 1] {
            let s = fiber_report(2, r, &Budget::default()).unwrap();
            assert!(s.checks.all_ok(), "n=2 r={r}: {:?}", s.checks);
        }
    }

    #[test]
    fn fiber_report_n3_max_degeneration() {
        let s = fiber_report(3, 2, &Budget::default()).unwrap();
        assert!(s.checks.all_ok(), "{:?}", s.checks);
        assert_eq!(s.hilbert.krull_dim, 5);
        assert_eq!(s.hilbert.multiplicity, 11);
        assert_eq!(s.hilbert.h_degree, 2);
        assert_eq!(s.hilbert.a_invariant, -3);
    }

    #[test]
    fn kernel_n2_r1_is_two_quadrics() {
        let table = MinorTable::maximal(2, 1).unwrap();
        let kr = kernel_via_elimination(&table, &Budget::default()).unwrap();
        // Plücker quadric + Laplace quadric
        assert_eq!(kr.gb.elements.len(), 2);
        assert!(kernel_matches_candidate(&kr, 2, 1, &Budget::default()).unwrap());
        // consistency with both descriptions since r = 1 = n-1 at n = 2
        assert!(kernel_matches_candidate(&kr, 2, n_minus_one(2), &Budget::default()).unwrap());
    }

    fn n_minus_one(n: u32) -> u32 {
        n - 1
    }

    #[test]
    fn kernel_n2_r0_is_plucker() {
        let table = MinorTable::maximal(2, 0).unwrap();
        let kr = kernel_via_elimination(&table, &Budget::default()).unwrap();
        assert_eq!(kr.gb.elements.len(), 1);
        assert!(kernel_matches_candidate(&kr, 2, 0, &Budget::default()).unwrap());
    }

    #[test]
    fn tiny_budget_reports_not_determined() {
        let table = MinorTable::maximal(2, 1).unwrap();
        let r = kernel_via_elimination(
            &table,
            &Budget {
                max_pairs: 1,
                max_seconds: 600,
            },
        );
        assert!(matches!(r, Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn candidate_membership_chain_n3() {
        // K[0] ⊆ K[1] ⊆ K[n-1] on candidate generators, via normal forms
        let budget = Budget::default();
        let (_r0, k0) = candidate_ideal(3, 0).unwrap();
        let (_r1, k1) = candidate_ideal(3, 1).unwrap();
        let (_r2, k2) = candidate_ideal(3, 2).unwrap();
        let gb1 = buchberger(&k1, &TermOrder::grevlex(), &budget);
        let gb2 = buchberger(&k2, &TermOrder::grevlex(), &budget);
        for g in k0.generators() {
            assert!(normal_form(g, &gb1).unwrap().is_zero());
        }
        for g in k1.generators() {
            assert!(normal_form(g, &gb2).unwrap().is_zero());
        }
    }
}
