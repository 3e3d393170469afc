//! Hilbert series of monomial ideals by pivot-variable recursion, and the
//! fiber invariants read off the reduced series `q(t)/(1-t)^dim`:
//! multiplicity `q(1)`, h-degree `deg q`, a-invariant `deg q - dim`.

use crate::error::Error;
use crate::groebner::GroebnerBasis;
use crate::monomial::Monomial;
use crate::vars::VarId;
use crate::Result;
use num::bigint::BigInt;
use num::traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// Invariants of a graded quotient, read off its Hilbert series. The
/// a-invariant equals regularity minus dimension only for Cohen–Macaulay
/// rings; `cm_assumed` records that this reading was applied.
#[derive(Clone, Debug, Serialize)]
pub struct HilbertSummary {
    /// `q(t)` with `q(1) != 0`.
    pub numerator: Vec<i64>,
    pub krull_dim: u32,
    pub multiplicity: i64,
    pub h_degree: u32,
    pub a_invariant: i64,
    pub cm_assumed: bool,
}

// -- small dense integer polynomials in t --------------------------------

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_add_shifted(acc: &mut Vec<BigInt>, p: &[BigInt], shift: usize) {
    if acc.len() < p.len() + shift {
        acc.resize(p.len() + shift, BigInt::zero());
    }
    for (i, c) in p.iter().enumerate() {
        acc[i + shift] += c;
    }
}

fn poly_trim(p: &mut Vec<BigInt>) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn eval_at_one(p: &[BigInt]) -> BigInt {
    p.iter().sum()
}

/// Exact division by `(1-t)`; callers check `p(1) == 0` first.
fn divide_by_one_minus_t(p: &[BigInt]) -> Vec<BigInt> {
    // p(t) = (1-t) * q(t)  =>  q_i = p_i + q_{i-1}
    let mut q = vec![BigInt::zero(); p.len().saturating_sub(1)];
    let mut carry = BigInt::zero();
    for i in 0..p.len().saturating_sub(1) {
        carry = &p[i] + &carry;
        q[i] = carry.clone();
    }
    q
}

fn one_minus_t_pow(d: u32) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); d as usize + 1];
    v[0] = BigInt::one();
    v[d as usize] = -BigInt::one();
    v
}

fn minimalize(gens: &mut Vec<Monomial>) {
    gens.sort_by_key(|g| g.degree());
    gens.dedup();
    let mut kept: Vec<Monomial> = Vec::new();
    for g in gens.iter() {
        if !kept.iter().any(|k| k.divides(g)) {
            kept.push(g.clone());
        }
    }
    *gens = kept;
}

/// Numerator `N(t)` of the Hilbert series `N(t)/(1-t)^nvars` of the
/// quotient by the monomial ideal generated by `gens`.
pub fn hilbert_numerator(gens: &[Monomial]) -> Result<Vec<BigInt>> {
    hilbert_numerator_weighted(gens, &[])
}

/// Same under a weighted grading: the series is `N(t) / Π (1-t^{w_v})`.
/// An empty weight slice means all weights 1.
pub fn hilbert_numerator_weighted(gens: &[Monomial], weights: &[u32]) -> Result<Vec<BigInt>> {
    let mut gens = gens.to_vec();
    minimalize(&mut gens);
    let mut nodes = 0u64;
    numerator_rec(gens, weights, &mut nodes)
}

fn weighted_degree(m: &Monomial, weights: &[u32]) -> u32 {
    m.exps()
        .iter()
        .map(|&(v, e)| e * weights.get(v as usize).copied().unwrap_or(1))
        .sum()
}

fn numerator_rec(gens: Vec<Monomial>, weights: &[u32], nodes: &mut u64) -> Result<Vec<BigInt>> {
    const NODE_BUDGET: u64 = 50_000_000;
    *nodes += 1;
    if *nodes > NODE_BUDGET {
        return Err(Error::BudgetExceeded("Hilbert recursion too large".into()));
    }
    if gens.is_empty() {
        return Ok(vec![BigInt::one()]);
    }
    if gens.iter().any(|g| g.is_one()) {
        return Ok(Vec::new()); // the unit ideal: series 0
    }
    // pairwise coprime: N = prod (1 - t^deg)
    let coprime = gens
        .iter()
        .enumerate()
        .all(|(i, g)| gens.iter().skip(i + 1).all(|h| g.coprime(h)));
    if coprime {
        let mut acc = vec![BigInt::one()];
        for g in &gens {
            acc = poly_mul(&acc, &one_minus_t_pow(weighted_degree(g, weights)));
        }
        return Ok(acc);
    }
    // pivot: the variable hitting the most generators
    let mut counts: BTreeMap<VarId, usize> = BTreeMap::new();
    for g in &gens {
        for v in g.vars() {
            *counts.entry(v).or_insert(0) += 1;
        }
    }
    let (&pivot, _) = counts
        .iter()
        .max_by_key(|(v, c)| (**c, std::cmp::Reverse(**v)))
        .expect("nonempty generators have variables");
    let pivot_mono = Monomial::var(pivot);
    // I + (v): v and the v-free generators
    let mut plus: Vec<Monomial> = gens
        .iter()
        .filter(|g| g.exponent(pivot) == 0)
        .cloned()
        .collect();
    plus.push(pivot_mono.clone());
    minimalize(&mut plus);
    // I : v
    let mut colon: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            if g.exponent(pivot) > 0 {
                pivot_mono.quotient_into(g)
            } else {
                g.clone()
            }
        })
        .collect();
    minimalize(&mut colon);
    let n_plus = numerator_rec(plus, weights, nodes)?;
    let n_colon = numerator_rec(colon, weights, nodes)?;
    let mut acc = n_plus;
    let shift = weights.get(pivot as usize).copied().unwrap_or(1) as usize;
    poly_add_shifted(&mut acc, &n_colon, shift);
    poly_trim(&mut acc);
    Ok(acc)
}

/// Hilbert function value at weighted degree `d` from a weighted numerator:
/// the coefficient of `t^d` in `N(t) / Π (1 - t^{w_v})`, expanded by
/// iterated prefix sums.
pub fn weighted_series_value(numerator: &[BigInt], weights: &[u32], d: u32) -> BigInt {
    let len = d as usize + 1;
    let mut p: Vec<BigInt> = numerator.iter().take(len).cloned().collect();
    p.resize(len, BigInt::zero());
    for &w in weights {
        let w = w as usize;
        if w == 0 {
            continue;
        }
        for i in w..len {
            let prev = p[i - w].clone();
            p[i] += prev;
        }
    }
    p[d as usize].clone()
}

/// Reads the fiber invariants off a complete basis of a homogeneous ideal:
/// the initial ideal shares the Hilbert series, whose reduced form yields
/// dimension, multiplicity, h-degree and the a-invariant.
pub fn hilbert_summary(gb: &GroebnerBasis, cm_assumed: bool) -> Result<HilbertSummary> {
    if !gb.complete {
        return Err(Error::IncompleteBasis);
    }
    for e in &gb.elements {
        if e.homogeneous_degree().is_none() {
            return Err(Error::NotHomogeneous(format!("{e}")));
        }
    }
    let nvars = gb.registry.num_vars();
    let lms = gb.leading_monomials();
    let mut n = hilbert_numerator(&lms)?;
    poly_trim(&mut n);
    if n.is_empty() {
        return Err(Error::InvalidConfig(
            "the unit ideal has no fiber invariants".into(),
        ));
    }
    let mut q = n;
    let mut dim = nvars;
    while eval_at_one(&q).is_zero() {
        q = divide_by_one_minus_t(&q);
        poly_trim(&mut q);
        dim -= 1;
    }
    let e_big = eval_at_one(&q);
    let numerator: Vec<i64> = q
        .iter()
        .map(|c| i64::try_from(c).map_err(|_| Error::OutOfRange("huge h-vector entry".into())))
        .collect::<Result<_>>()?;
    let h_degree = (q.len() - 1) as u32;
    Ok(HilbertSummary {
        numerator,
        krull_dim: dim,
        multiplicity: i64::try_from(&e_big)
            .map_err(|_| Error::OutOfRange("huge multiplicity".into()))?,
        h_degree,
        a_invariant: h_degree as i64 - dim as i64,
        cm_assumed,
    })
}

impl HilbertSummary {
    /// Value of the Hilbert function in degree `d`, from the reduced series.
    pub fn hilbert_function(&self, d: u32) -> i64 {
        let dim = self.krull_dim;
        let mut acc: i128 = 0;
        for (i, &qi) in self.numerator.iter().enumerate() {
            let i = i as u32;
            if i > d {
                break;
            }
            if dim == 0 {
                if i == d {
                    acc += qi as i128;
                }
            } else {
                let m = (d - i + dim - 1) as u64;
                acc += qi as i128 * crate::scalar::binomial(m, (dim - 1) as u64) as i128;
            }
        }
        acc as i64
    }
}

/// Brute-force count of standard monomials (those outside the leading-term
/// ideal) of total degree exactly `d`.
pub fn count_standard_monomials(lms: &[Monomial], nvars: u32, d: u32) -> u64 {
    let mut gens = lms.to_vec();
    minimalize(&mut gens);
    let mut exps = vec![0u32; nvars as usize];
    fn rec(var: usize, remaining: u32, exps: &mut Vec<u32>, gens: &[Monomial], nvars: u32) -> u64 {
        // prune: a generator supported on the assigned prefix already divides
        let assigned_divides = |g: &Monomial| {
            g.exps()
                .iter()
                .all(|&(v, e)| (v as usize) < var && exps[v as usize] >= e)
        };
        if gens.iter().any(assigned_divides) {
            return 0;
        }
        if var == nvars as usize {
            return if remaining == 0 { 1 } else { 0 };
        }
        if var == nvars as usize - 1 {
            exps[var] = remaining;
            let full = gens.iter().any(|g| {
                g.exps()
                    .iter()
                    .all(|&(v, e)| exps[v as usize] >= e)
            });
            exps[var] = 0;
            return if full { 0 } else { 1 };
        }
        let mut total = 0;
        for e in 0..=remaining {
            exps[var] = e;
            total += rec(var + 1, remaining - e, exps, gens, nvars);
        }
        exps[var] = 0;
        total
    }
    rec(0, d, &mut exps, &gens, nvars)
}
