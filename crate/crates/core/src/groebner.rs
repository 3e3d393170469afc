//! A deterministic Buchberger engine: sugar-degree pair selection, the
//! Gebauer–Möller update, fraction-free integer reduction with content
//! stripping, and full inter-reduction to the unique reduced basis.
//!
//! Budgets (pair count and wall time) make every run interruptible; a
//! partial basis is flagged `complete = false` and is refused by
//! `normal_form`, so nothing downstream can certify against it.

use crate::error::Error;
use crate::monomial::Monomial;
use crate::order::TermOrder;
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::vars::VariableRegistry;
use crate::Result;
use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use num::Integer;
use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

/// A list of nonzero, deduplicated generators with an optional label.
#[derive(Clone, Debug)]
pub struct Ideal {
    registry: Arc<VariableRegistry>,
    generators: Vec<Polynomial>,
    pub label: Option<String>,
}

impl Ideal {
    pub fn new(registry: &Arc<VariableRegistry>, gens: Vec<Polynomial>) -> Self {
        let mut seen: Vec<Polynomial> = Vec::new();
        for g in gens {
            if g.is_zero() {
                continue;
            }
            if !seen.contains(&g) {
                seen.push(g);
            }
        }
        Ideal {
            registry: registry.clone(),
            generators: seen,
            label: None,
        }
    }

    pub fn labeled(registry: &Arc<VariableRegistry>, gens: Vec<Polynomial>, label: &str) -> Self {
        let mut i = Self::new(registry, gens);
        i.label = Some(label.to_string());
        i
    }

    pub fn registry(&self) -> &Arc<VariableRegistry> {
        &self.registry
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generator counts by total degree (for inventories in reports).
    pub fn degree_inventory(&self) -> std::collections::BTreeMap<u32, usize> {
        let mut map = std::collections::BTreeMap::new();
        for g in &self.generators {
            *map.entry(g.degree().unwrap_or(0)).or_insert(0) += 1;
        }
        map
    }
}

/// Resource limits for one engine run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Budget {
    pub max_pairs: u64,
    pub max_seconds: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pairs: 1_000_000,
            max_seconds: 600,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, serde::Serialize)]
pub struct GbStats {
    pub pairs_processed: u64,
    pub reduction_steps: u64,
    pub max_degree: u32,
}

/// Degree weights for the sugar heuristic. Sugar selection processes pairs
/// by (sugar, creation index); when the ideal is homogeneous under these
/// weights the sugar is the exact degree and the run settles degree by
/// degree. `None` means all weights 1.
#[derive(Clone, Debug, Default)]
pub struct SugarWeights(Option<Arc<Vec<u32>>>);

impl SugarWeights {
    pub fn uniform() -> Self {
        SugarWeights(None)
    }

    pub fn of(weights: Vec<u32>) -> Self {
        SugarWeights(Some(Arc::new(weights)))
    }

    /// Weight 1 on ground variables, `t_weight` on the T-block.
    pub fn for_registry(registry: &VariableRegistry, t_weight: u32) -> Self {
        let w: Vec<u32> = (0..registry.num_vars())
            .map(|v| if registry.is_t(v) { t_weight } else { 1 })
            .collect();
        SugarWeights(Some(Arc::new(w)))
    }

    pub(crate) fn weight_of(&self, v: u32) -> u32 {
        match &self.0 {
            None => 1,
            Some(w) => w.get(v as usize).copied().unwrap_or(1),
        }
    }

    fn degree(&self, m: &Monomial) -> u32 {
        match &self.0 {
            None => m.degree(),
            Some(w) => m
                .exps()
                .iter()
                .map(|&(v, e)| e * w.get(v as usize).copied().unwrap_or(1))
                .sum(),
        }
    }

    fn poly_degree(&self, terms: &[(Monomial, BigInt)]) -> u32 {
        terms.iter().map(|(m, _)| self.degree(m)).max().unwrap_or(0)
    }
}

/// A reduced Gröbner basis: monic elements, sorted ascending by leading
/// monomial. `complete == false` marks a budget-truncated run.
#[derive(Clone)]
pub struct GroebnerBasis {
    pub registry: Arc<VariableRegistry>,
    pub order: TermOrder,
    pub elements: Vec<Polynomial>,
    pub complete: bool,
    pub stats: GbStats,
}

impl GroebnerBasis {
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .filter_map(|p| p.leading(&self.order).map(|(m, _)| m.clone()))
            .collect()
    }

    pub fn max_element_degree(&self) -> u32 {
        self.elements
            .iter()
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0)
    }

    /// Post-hoc certificate: every S-pair of the basis reduces to zero.
    pub fn verify(&self) -> Result<bool> {
        if !self.complete {
            return Err(Error::IncompleteBasis);
        }
        let basis: Vec<IPoly> = self
            .elements
            .iter()
            .map(|p| IPoly::from_polynomial(p, &self.order))
            .collect();
        let deadline = Deadline::unlimited();
        let mut stats = GbStats::default();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let s = s_poly(&basis[i], &basis[j], &self.order);
                let (nf, _) =
                    normal_form_int(s.terms, 0, &basis, &self.order, &deadline, &mut stats)?;
                if !nf.is_empty() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

// ---------------------------------------------------------------------
// integer polynomials: descending term vectors, primitive, positive lead
// ---------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
struct IPoly {
    terms: Vec<(Monomial, BigInt)>,
    sugar: u32,
}

impl IPoly {
    fn from_polynomial(p: &Polynomial, order: &TermOrder) -> IPoly {
        Self::from_polynomial_weighted(p, order, &SugarWeights::uniform())
    }

    fn from_polynomial_weighted(p: &Polynomial, order: &TermOrder, weights: &SugarWeights) -> IPoly {
        let mut den_lcm = BigInt::one();
        for (_, c) in p.terms() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut terms: Vec<(Monomial, BigInt)> = p
            .terms()
            .map(|(m, c)| (m.clone(), c.numer() * (&den_lcm / c.denom())))
            .collect();
        order.sort_desc(&mut terms);
        let sugar = weights.poly_degree(&terms);
        let mut out = IPoly { terms, sugar };
        out.normalize();
        out
    }

    fn to_monic_polynomial(&self, registry: &Arc<VariableRegistry>) -> Polynomial {
        if self.terms.is_empty() {
            return Polynomial::zero(registry);
        }
        let lead = self.terms[0].1.clone();
        Polynomial::from_terms(
            registry,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), Scalar::new(c.clone(), lead.clone()))),
        )
    }

    fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead_mono(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lead_coeff(&self) -> &BigInt {
        &self.terms[0].1
    }

    /// Strips content and makes the leading coefficient positive.
    fn normalize(&mut self) {
        normalize_terms(&mut self.terms);
    }
}

fn normalize_terms(terms: &mut [(Monomial, BigInt)]) {
    if terms.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, c) in terms.iter() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if terms[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, c) in terms.iter_mut() {
            *c = &*c / &g;
        }
    }
}

/// `ca * a + cb * (qb * b)`, both inputs descending; result descending.
fn axpy(
    a: &[(Monomial, BigInt)],
    ca: &BigInt,
    b: &[(Monomial, BigInt)],
    cb: &BigInt,
    qb: &Monomial,
    order: &TermOrder,
) -> Vec<(Monomial, BigInt)> {
    let ca_one = ca.is_one();
    let scale_a = |c: &BigInt| if ca_one { c.clone() } else { ca * c };
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        let mb = qb.mul(&b[j].0);
        match order.cmp(&a[i].0, &mb) {
            std::cmp::Ordering::Greater => {
                out.push((a[i].0.clone(), scale_a(&a[i].1)));
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push((mb, cb * &b[j].1));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = scale_a(&a[i].1) + cb * &b[j].1;
                if !c.is_zero() {
                    out.push((mb, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    while i < a.len() {
        out.push((a[i].0.clone(), scale_a(&a[i].1)));
        i += 1;
    }
    while j < b.len() {
        out.push((qb.mul(&b[j].0), cb * &b[j].1));
        j += 1;
    }
    out
}

struct Deadline {
    start: Instant,
    max_seconds: u64,
}

impl Deadline {
    fn new(max_seconds: u64) -> Self {
        Deadline {
            start: Instant::now(),
            max_seconds,
        }
    }

    fn unlimited() -> Self {
        Deadline {
            start: Instant::now(),
            max_seconds: u64::MAX,
        }
    }

    fn expired(&self) -> bool {
        self.max_seconds != u64::MAX && self.start.elapsed().as_secs() >= self.max_seconds
    }
}

/// Full normal form of an integer polynomial against a basis. The result
/// is primitive, which changes nothing for zero tests or leading terms.
/// Also returns the sugar degree reached.
fn normal_form_int(
    w: Vec<(Monomial, BigInt)>,
    sugar: u32,
    basis: &[IPoly],
    order: &TermOrder,
    deadline: &Deadline,
    stats: &mut GbStats,
) -> Result<(Vec<(Monomial, BigInt)>, u32)> {
    normal_form_int_weighted(w, sugar, basis, order, deadline, stats, &SugarWeights::uniform())
}

#[allow(clippy::too_many_arguments)]
fn normal_form_int_weighted(
    w: Vec<(Monomial, BigInt)>,
    sugar: u32,
    basis: &[IPoly],
    order: &TermOrder,
    deadline: &Deadline,
    stats: &mut GbStats,
    weights: &SugarWeights,
) -> Result<(Vec<(Monomial, BigInt)>, u32)> {
    reduce_int_weighted(w, sugar, basis, order, deadline, stats, weights, true)
}

/// Top-reduction (`full = false`) stops as soon as the leading monomial is
/// irreducible; the main loop uses it and defers tails to the final
/// inter-reduction.
#[allow(clippy::too_many_arguments)]
fn reduce_int_weighted(
    mut w: Vec<(Monomial, BigInt)>,
    sugar: u32,
    basis: &[IPoly],
    order: &TermOrder,
    deadline: &Deadline,
    stats: &mut GbStats,
    weights: &SugarWeights,
    full: bool,
) -> Result<(Vec<(Monomial, BigInt)>, u32)> {
    let mut frontier = 0usize;
    let mut sugar = sugar;
    let mut since_strip = 0u32;
    while frontier < w.len() {
        let reducer = basis
            .iter()
            .find(|g| !g.is_empty() && g.lead_mono().divides(&w[frontier].0));
        let Some(g) = reducer else {
            if !full {
                break;
            }
            frontier += 1;
            continue;
        };
        stats.reduction_steps += 1;
        if stats.reduction_steps % 256 == 0 && deadline.expired() {
            return Err(Error::BudgetExceeded("reduction deadline".into()));
        }
        let q = g.lead_mono().quotient_into(&w[frontier].0);
        sugar = sugar.max(g.sugar + weights.degree(&q));
        let d = w[frontier].1.gcd(g.lead_coeff());
        let cw = g.lead_coeff() / &d; // positive: basis leads are positive
        let cg = -(&w[frontier].1 / &d);
        // the prefix is only scaled; its monomials stay irreducible
        let mut new_w: Vec<(Monomial, BigInt)> = Vec::with_capacity(w.len() + g.terms.len());
        for (m, c) in &w[..frontier] {
            new_w.push((m.clone(), c * &cw));
        }
        let tail = axpy(&w[frontier..], &cw, &g.terms, &cg, &q, order);
        debug_assert!(tail.first().map(|t| t.0 != w[frontier].0).unwrap_or(true));
        new_w.extend(tail);
        w = new_w;
        since_strip += 1;
        if since_strip >= 16 {
            normalize_terms(&mut w);
            since_strip = 0;
        }
    }
    normalize_terms(&mut w);
    Ok((w, sugar))
}

fn s_poly(f: &IPoly, g: &IPoly, order: &TermOrder) -> IPoly {
    s_poly_weighted(f, g, order, &SugarWeights::uniform())
}

fn s_poly_weighted(f: &IPoly, g: &IPoly, order: &TermOrder, weights: &SugarWeights) -> IPoly {
    let u = f.lead_mono().lcm(g.lead_mono());
    let d = f.lead_coeff().gcd(g.lead_coeff());
    let cf = g.lead_coeff() / &d;
    let cg = -(f.lead_coeff() / &d);
    let qf = f.lead_mono().quotient_into(&u);
    let qg = g.lead_mono().quotient_into(&u);
    let shifted: Vec<(Monomial, BigInt)> =
        f.terms.iter().map(|(m, c)| (qf.mul(m), c.clone())).collect();
    let terms = axpy(&shifted, &cf, &g.terms, &cg, &qg, order);
    let sugar = (f.sugar + weights.degree(&qf)).max(g.sugar + weights.degree(&qg));
    IPoly { terms, sugar }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Pair {
    sugar: u32,
    idx: u64,
    i: usize,
    j: usize,
    lcm: Monomial,
}

impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pair {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.sugar, self.idx).cmp(&(other.sugar, other.idx))
    }
}

/// Computes the reduced Gröbner basis of the ideal under the order, within
/// the budget. A budget overrun yields `complete = false` rather than an
/// error so callers can inspect the partial run.
pub fn buchberger(ideal: &Ideal, order: &TermOrder, budget: &Budget) -> GroebnerBasis {
    buchberger_weighted(ideal, order, budget, &SugarWeights::uniform())
}

/// Buchberger with a custom sugar grading (the selection strategy is still
/// (sugar, creation index); only the degree that feeds it changes).
pub fn buchberger_weighted(
    ideal: &Ideal,
    order: &TermOrder,
    budget: &Budget,
    weights: &SugarWeights,
) -> GroebnerBasis {
    buchberger_driven(ideal, order, budget, weights, None)
}

/// Engine entry that optionally knows the quotient is a free polynomial
/// ring on `free_rank` weight-one variables (true for graph ideals), which
/// lets whole degrees of pairs be discharged by Hilbert counting.
pub fn buchberger_driven(
    ideal: &Ideal,
    order: &TermOrder,
    budget: &Budget,
    weights: &SugarWeights,
    hilbert_free_rank: Option<u32>,
) -> GroebnerBasis {
    let registry = ideal.registry().clone();
    if let Some(fast) = crate::fastgb::try_buchberger(
        &registry,
        ideal.generators(),
        order,
        budget,
        weights,
        hilbert_free_rank,
    ) {
        return GroebnerBasis {
            registry,
            order: order.clone(),
            elements: fast.elements,
            complete: fast.complete,
            stats: fast.stats,
        };
    }
    let deadline = Deadline::new(budget.max_seconds);
    let mut stats = GbStats::default();
    let mut basis: Vec<IPoly> = Vec::new();
    let mut pairs: BTreeSet<Pair> = BTreeSet::new();
    let mut pair_counter: u64 = 0;
    let mut complete = true;

    fn add_element(
        h: IPoly,
        basis: &mut Vec<IPoly>,
        pairs: &mut BTreeSet<Pair>,
        pair_counter: &mut u64,
        weights: &SugarWeights,
    ) {
        let t = basis.len();
        let lm_t = h.lead_mono().clone();
        // Gebauer-Möller update: keep one representative per lcm, drop pairs
        // whose lcm is properly divided by another, apply the coprimality
        // criterion, then prune old pairs by the chain criterion.
        let candidates: Vec<(usize, Monomial)> = (0..t)
            .map(|i| (i, basis[i].lead_mono().lcm(&lm_t)))
            .collect();
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        for (pos, (i, lcm_i)) in candidates.iter().enumerate() {
            let coprime = basis[*i].lead_mono().coprime(&lm_t);
            let dominated = candidates
                .iter()
                .enumerate()
                .any(|(p2, (_, l2))| p2 > pos && l2 != lcm_i && l2.divides(lcm_i))
                || kept
                    .iter()
                    .any(|(_, l2, _)| l2 == lcm_i || (l2 != lcm_i && l2.divides(lcm_i)));
            if !dominated {
                kept.push((*i, lcm_i.clone(), coprime));
            }
        }
        pairs.retain(|p| {
            !(lm_t.divides(&p.lcm)
                && basis[p.i].lead_mono().lcm(&lm_t) != p.lcm
                && basis[p.j].lead_mono().lcm(&lm_t) != p.lcm)
        });
        for (i, lcm, coprime) in kept {
            if coprime {
                continue; // product criterion
            }
            let qi = weights.degree(&basis[i].lead_mono().quotient_into(&lcm));
            let qt = weights.degree(&lm_t.quotient_into(&lcm));
            let sugar = (basis[i].sugar + qi).max(h.sugar + qt);
            *pair_counter += 1;
            pairs.insert(Pair {
                sugar,
                idx: *pair_counter,
                i,
                j: t,
                lcm,
            });
        }
        basis.push(h);
    }

    for g in ideal.generators() {
        let ip = IPoly::from_polynomial_weighted(g, order, weights);
        if !ip.is_empty() {
            add_element(ip, &mut basis, &mut pairs, &mut pair_counter, weights);
        }
    }

    let debug = std::env::var("HFB_GB_DEBUG").is_ok();
    while let Some(pair) = pairs.iter().next().cloned() {
        pairs.remove(&pair);
        if stats.pairs_processed >= budget.max_pairs || deadline.expired() {
            complete = false;
            break;
        }
        stats.pairs_processed += 1;
        if debug && stats.pairs_processed % 100 == 0 {
            let max_terms = basis.iter().map(|g| g.terms.len()).max().unwrap_or(0);
            let max_bits = basis
                .iter()
                .flat_map(|g| g.terms.iter().map(|(_, c)| c.bits()))
                .max()
                .unwrap_or(0);
            eprintln!(
                "[gb] pairs={} queue={} basis={} max_terms={} max_bits={} red_steps={} sugar={}",
                stats.pairs_processed,
                pairs.len(),
                basis.len(),
                max_terms,
                max_bits,
                stats.reduction_steps,
                pair.sugar
            );
        }
        let s = s_poly_weighted(&basis[pair.i], &basis[pair.j], order, weights);
        let nf = reduce_int_weighted(
            s.terms, s.sugar, &basis, order, &deadline, &mut stats, weights, false,
        );
        let (nf_terms, nf_sugar) = match nf {
            Ok(v) => v,
            Err(_) => {
                complete = false;
                break;
            }
        };
        if nf_terms.is_empty() {
            continue;
        }
        stats.max_degree = stats.max_degree.max(nf_terms[0].0.degree());
        let h = IPoly {
            terms: nf_terms,
            sugar: nf_sugar,
        };
        add_element(h, &mut basis, &mut pairs, &mut pair_counter, weights);
    }

    let elements = if complete {
        inter_reduce(basis, order, &registry)
    } else {
        // partial run: expose monic elements, deterministically sorted
        let mut els: Vec<Polynomial> = basis
            .iter()
            .filter(|g| !g.is_empty())
            .map(|g| g.to_monic_polynomial(&registry))
            .collect();
        sort_by_lm(&mut els, order);
        els
    };

    GroebnerBasis {
        registry,
        order: order.clone(),
        elements,
        complete,
        stats,
    }
}

fn sort_by_lm(els: &mut [Polynomial], order: &TermOrder) {
    els.sort_by(|a, b| {
        let la = a.leading(order).map(|(m, _)| m.clone()).unwrap_or_default();
        let lb = b.leading(order).map(|(m, _)| m.clone()).unwrap_or_default();
        order.cmp(&la, &lb)
    });
}

/// Minimalizes the leading-term set and fully reduces every survivor
/// against the others; the outcome is the unique reduced basis.
fn inter_reduce(
    basis: Vec<IPoly>,
    order: &TermOrder,
    registry: &Arc<VariableRegistry>,
) -> Vec<Polynomial> {
    let mut idx: Vec<usize> = (0..basis.len()).filter(|&i| !basis[i].is_empty()).collect();
    idx.sort_by(|&a, &b| order.cmp(basis[a].lead_mono(), basis[b].lead_mono()));
    let mut kept: Vec<IPoly> = Vec::new();
    for i in idx {
        if !kept
            .iter()
            .any(|k| k.lead_mono().divides(basis[i].lead_mono()))
        {
            kept.push(basis[i].clone());
        }
    }
    let deadline = Deadline::unlimited();
    let mut stats = GbStats::default();
    loop {
        let mut changed = false;
        for i in 0..kept.len() {
            let others: Vec<IPoly> = kept
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let (nf, _) = normal_form_int(
                kept[i].terms.clone(),
                kept[i].sugar,
                &others,
                order,
                &deadline,
                &mut stats,
            )
            .expect("unlimited deadline");
            if nf != kept[i].terms {
                changed = true;
                kept[i] = IPoly {
                    terms: nf,
                    sugar: kept[i].sugar,
                };
            }
        }
        if !changed {
            break;
        }
    }
    let mut out: Vec<Polynomial> = kept
        .iter()
        .map(|g| g.to_monic_polynomial(registry))
        .collect();
    sort_by_lm(&mut out, order);
    out
}

/// Unique remainder of `p` modulo a complete basis; zero exactly when `p`
/// lies in the ideal.
pub fn normal_form(p: &Polynomial, gb: &GroebnerBasis) -> Result<Polynomial> {
    if !gb.complete {
        return Err(Error::IncompleteBasis);
    }
    if !VariableRegistry::same(p.registry(), &gb.registry) {
        return Err(Error::RegistryMismatch);
    }
    if p.is_zero() {
        return Ok(p.clone());
    }
    if let Some(nf) = crate::fastgb::try_normal_form(p, &gb.elements, &gb.order, &gb.registry) {
        return Ok(nf);
    }
    let order = &gb.order;
    let mut work: Vec<(Monomial, Scalar)> =
        p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    order.sort_desc(&mut work);
    let basis: Vec<(Monomial, Vec<(Monomial, Scalar)>)> = gb
        .elements
        .iter()
        .map(|g| {
            let lm = g.leading(order).expect("basis elements nonzero").0.clone();
            let mut terms: Vec<(Monomial, Scalar)> =
                g.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
            order.sort_desc(&mut terms);
            (lm, terms)
        })
        .collect();
    let mut frontier = 0usize;
    while frontier < work.len() {
        let hit = basis.iter().find(|(lm, _)| lm.divides(&work[frontier].0));
        let Some((lm, gterms)) = hit else {
            frontier += 1;
            continue;
        };
        let q = lm.quotient_into(&work[frontier].0);
        let factor = work[frontier].1.clone(); // basis is monic
        let mut merged: Vec<(Monomial, Scalar)> = Vec::with_capacity(work.len() + gterms.len());
        merged.extend_from_slice(&work[..frontier]);
        let (mut i, mut j) = (frontier, 0usize);
        while i < work.len() && j < gterms.len() {
            let mb = q.mul(&gterms[j].0);
            match order.cmp(&work[i].0, &mb) {
                std::cmp::Ordering::Greater => {
                    merged.push(work[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    merged.push((mb, -(&gterms[j].1 * &factor)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &work[i].1 - &(&gterms[j].1 * &factor);
                    if !c.is_zero() {
                        merged.push((mb, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        while i < work.len() {
            merged.push(work[i].clone());
            i += 1;
        }
        while j < gterms.len() {
            merged.push((q.mul(&gterms[j].0), -(&gterms[j].1 * &factor)));
            j += 1;
        }
        work = merged;
    }
    Ok(Polynomial::from_terms(&gb.registry, work))
}

/// Two-sided containment through normal forms: every generator of each
/// ideal reduces to zero against the other's complete basis.
pub fn ideals_equal(
    a: &Ideal,
    gb_a: &GroebnerBasis,
    b: &Ideal,
    gb_b: &GroebnerBasis,
) -> Result<bool> {
    for g in a.generators() {
        if !normal_form(g, gb_b)?.is_zero() {
            return Ok(false);
        }
    }
    for g in b.generators() {
        if !normal_form(g, gb_a)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn xreg(n: u32) -> Arc<VariableRegistry> {
        VariableRegistry::x_only(n)
    }

    fn gb_of(reg: &Arc<VariableRegistry>, gens: &[&str], order: TermOrder) -> GroebnerBasis {
        let ideal = Ideal::new(
            reg,
            gens.iter()
                .map(|s| parse_polynomial(reg, s).unwrap())
                .collect(),
        );
        buchberger(&ideal, &order, &Budget::default())
    }

    #[test]
    fn single_generator_is_its_own_basis() {
        let reg = xreg(2);
        let gb = gb_of(&reg, &["2*x1^2 - 4*x2"], TermOrder::grevlex());
        assert!(gb.complete);
        assert_eq!(gb.elements.len(), 1);
        assert_eq!(
            gb.elements[0],
            parse_polynomial(&reg, "x1^2 - 2*x2").unwrap()
        );
    }

    #[test]
    fn grassmann_24_principal() {
        let reg = VariableRegistry::grassmann(4, 2);
        let gb = gb_of(
            &reg,
            &["T[1,2]*T[3,4] - T[1,3]*T[2,4] + T[1,4]*T[2,3]"],
            TermOrder::grevlex(),
        );
        assert!(gb.complete);
        assert_eq!(gb.elements.len(), 1);
        assert!(gb.verify().unwrap());
    }

    #[test]
    fn classic_lex_example() {
        let reg = xreg(2);
        let gb = gb_of(&reg, &["x1^2 - x2", "x1*x2 - x1"], TermOrder::lex());
        assert!(gb.complete);
        assert!(gb.verify().unwrap());
        let target = parse_polynomial(&reg, "x2^2 - x2").unwrap();
        assert!(gb.elements.iter().any(|e| *e == target));
    }

    #[test]
    fn katsura_3_runs_and_verifies() {
        let reg = xreg(3);
        let gb = gb_of(
            &reg,
            &[
                "x1 + 2*x2 + 2*x3 - 1",
                "x1^2 + 2*x2^2 + 2*x3^2 - x1",
                "2*x1*x2 + 2*x2*x3 - x2",
            ],
            TermOrder::grevlex(),
        );
        assert!(gb.complete);
        assert!(gb.verify().unwrap());
        assert!(gb.elements.len() >= 3);
    }

    #[test]
    fn normal_form_properties() {
        let reg = xreg(2);
        let gb = gb_of(&reg, &["x1^2 - x2"], TermOrder::grevlex());
        let member = parse_polynomial(&reg, "x1^4 - x2^2").unwrap();
        assert!(normal_form(&member, &gb).unwrap().is_zero());
        // units survive proper ideals
        let one = Polynomial::one(&reg);
        assert_eq!(normal_form(&one, &gb).unwrap(), one);
        // remainder fully reduced
        let p = parse_polynomial(&reg, "x1^3 + x1").unwrap();
        let nf = normal_form(&p, &gb).unwrap();
        assert_eq!(nf, parse_polynomial(&reg, "x1*x2 + x1").unwrap());
    }

    #[test]
    fn budget_yields_incomplete_basis() {
        let reg = xreg(3);
        let ideal = Ideal::new(
            &reg,
            ["x1^2 + x2*x3", "x2^2 + x1*x3", "x3^2 + x1*x2"]
                .iter()
                .map(|s| parse_polynomial(&reg, s).unwrap())
                .collect(),
        );
        let gb = buchberger(
            &ideal,
            &TermOrder::grevlex(),
            &Budget {
                max_pairs: 1,
                max_seconds: 600,
            },
        );
        assert!(!gb.complete);
        let p = Polynomial::var(&reg, 0);
        assert!(matches!(normal_form(&p, &gb), Err(Error::IncompleteBasis)));
    }

    #[test]
    fn deterministic_runs() {
        let reg = xreg(3);
        let gens = ["x1*x2 - x3^2", "x2*x3 - x1^2", "x1*x3 - x2^2"];
        let a = gb_of(&reg, &gens, TermOrder::grevlex());
        let b = gb_of(&reg, &gens, TermOrder::grevlex());
        assert_eq!(a.elements, b.elements);
        assert_eq!(a.stats.pairs_processed, b.stats.pairs_processed);
    }

    #[test]
    fn ideal_dedups_and_drops_zero() {
        let reg = xreg(2);
        let p = parse_polynomial(&reg, "x1 - x2").unwrap();
        let ideal = Ideal::new(&reg, vec![p.clone(), Polynomial::zero(&reg), p.clone()]);
        assert_eq!(ideal.len(), 1);
    }

    #[test]
    fn elimination_order_projects() {
        // eliminate x1 from {x1 - x2^2, x1*x2 - 1}: expect x2^3 - 1
        let reg = xreg(2);
        let gb = gb_of(
            &reg,
            &["x1 - x2^2", "x1*x2 - 1"],
            TermOrder::eliminate(&[0]),
        );
        assert!(gb.complete);
        let target = parse_polynomial(&reg, "x2^3 - 1").unwrap();
        assert!(
            gb.elements.iter().any(|e| *e == target),
            "elimination ideal should contain x2^3 - 1, got {:?}",
            gb.elements
        );
    }

    #[test]
    fn cyclic_quadrics_complete_intersection() {
        // coprime leading terms: inputs are already a basis
        let reg = xreg(4);
        let gb = gb_of(&reg, &["x1^2 - x3*x4", "x2^2 - x3*x4"], TermOrder::grevlex());
        assert!(gb.complete);
        assert_eq!(gb.elements.len(), 2);
        assert_eq!(gb.stats.pairs_processed, 0, "product criterion skips the pair");
        assert!(gb.verify().unwrap());
    }
}
