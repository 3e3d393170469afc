//! Internal engine core: packed monomial keys whose bytewise order equals
//! the term order, and in-place map reduction that only touches the terms
//! a step actually changes. Falls back to the generic path (in
//! `groebner`) when a registry or order cannot be packed.
//!
//! Basis elements are monic over the rationals, so a reduction step never
//! rescales untouched terms.

use crate::groebner::{Budget, GbStats, SugarWeights};
use crate::hilbert::{hilbert_numerator_weighted, weighted_series_value};
use num::bigint::BigInt;
use crate::monomial::Monomial;
use crate::order::TermOrder;
use crate::poly::Polynomial;
use crate::scalar::{self, Scalar};
use crate::vars::{VarId, VariableRegistry};
use num::traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

pub(crate) const MAXV: usize = 48;
const KEYLEN: usize = 56;

type Exps = [u8; MAXV];
type Key = [u8; KEYLEN];

#[derive(Clone, Debug)]
enum SegmentKind {
    Graded, // 2-byte degree, then 255-e over vars in reverse priority
    Lex,    // raw exponents in priority order
}

#[derive(Clone, Debug)]
struct Segment {
    kind: SegmentKind,
    vars: Vec<usize>, // priority order, most significant first
    offset: usize,
}

/// Compiled key layout for one (order, registry) pair.
pub(crate) struct Codec {
    nvars: usize,
    segments: Vec<Segment>,
}

impl Codec {
    pub(crate) fn build(order: &TermOrder, nvars: u32) -> Option<Codec> {
        let nvars = nvars as usize;
        if nvars == 0 || nvars > MAXV {
            return None;
        }
        let all: Vec<usize> = (0..nvars).collect();
        let mut segments = Vec::new();
        if !flatten(order, &all, &mut segments) {
            return None;
        }
        let mut offset = 0;
        for seg in &mut segments {
            seg.offset = offset;
            offset += match seg.kind {
                SegmentKind::Graded => 2 + seg.vars.len(),
                SegmentKind::Lex => seg.vars.len(),
            };
        }
        if offset > KEYLEN {
            return None;
        }
        Some(Codec { nvars, segments })
    }

    /// `None` when an exponent or a segment degree overflows the packing.
    fn encode(&self, exps: &Exps) -> Option<Key> {
        let mut key = [0u8; KEYLEN];
        for seg in &self.segments {
            match seg.kind {
                SegmentKind::Graded => {
                    let mut deg: u32 = 0;
                    for &v in &seg.vars {
                        deg += exps[v] as u32;
                    }
                    if deg > u16::MAX as u32 {
                        return None;
                    }
                    key[seg.offset] = (deg >> 8) as u8;
                    key[seg.offset + 1] = (deg & 0xff) as u8;
                    // reverse priority: least significant variable first
                    for (slot, &v) in seg.vars.iter().rev().enumerate() {
                        key[seg.offset + 2 + slot] = 255 - exps[v];
                    }
                }
                SegmentKind::Lex => {
                    for (slot, &v) in seg.vars.iter().enumerate() {
                        key[seg.offset + slot] = exps[v];
                    }
                }
            }
        }
        Some(key)
    }

    fn decode(&self, key: &Key) -> Exps {
        let mut exps = [0u8; MAXV];
        for seg in &self.segments {
            match seg.kind {
                SegmentKind::Graded => {
                    for (slot, &v) in seg.vars.iter().rev().enumerate() {
                        exps[v] = 255 - key[seg.offset + 2 + slot];
                    }
                }
                SegmentKind::Lex => {
                    for (slot, &v) in seg.vars.iter().enumerate() {
                        exps[v] = key[seg.offset + slot];
                    }
                }
            }
        }
        exps
    }

    fn mono_to_exps(&self, m: &Monomial) -> Option<Exps> {
        let mut exps = [0u8; MAXV];
        for &(v, e) in m.exps() {
            if v as usize >= self.nvars || e > 255 {
                return None;
            }
            exps[v as usize] = e as u8;
        }
        Some(exps)
    }

    fn exps_to_mono(&self, exps: &Exps) -> Monomial {
        let pairs: Vec<(VarId, u32)> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| (v as VarId, e as u32))
            .collect();
        Monomial::from_pairs(&pairs)
    }
}

fn flatten(order: &TermOrder, allowed: &[usize], out: &mut Vec<Segment>) -> bool {
    match order {
        TermOrder::GrevLex(perm) | TermOrder::Lex(perm) => {
            let vars: Vec<usize> = match perm {
                None => allowed.to_vec(),
                Some(p) => {
                    // priority order from the permutation, restricted
                    let set: BTreeSet<usize> = allowed.iter().copied().collect();
                    let mut vs: Vec<usize> = Vec::new();
                    for &v in p_order(p) {
                        if set.contains(&(v as usize)) {
                            vs.push(v as usize);
                        }
                    }
                    if vs.len() != allowed.len() {
                        return false; // permutation does not cover the block
                    }
                    vs
                }
            };
            if vars.is_empty() {
                return true;
            }
            out.push(Segment {
                kind: if matches!(order, TermOrder::GrevLex(_)) {
                    SegmentKind::Graded
                } else {
                    SegmentKind::Lex
                },
                vars,
                offset: 0,
            });
            true
        }
        TermOrder::Block {
            first_mask,
            first,
            rest,
        } => {
            let first_vars: Vec<usize> = allowed
                .iter()
                .copied()
                .filter(|&v| v < 64 && (first_mask >> v) & 1 == 1)
                .collect();
            let rest_vars: Vec<usize> = allowed
                .iter()
                .copied()
                .filter(|&v| !(v < 64 && (first_mask >> v) & 1 == 1))
                .collect();
            flatten(first, &first_vars, out) && flatten(rest, &rest_vars, out)
        }
    }
}

fn p_order(p: &crate::order::Perm) -> &[VarId] {
    p.priority()
}

// -- raw exponent-vector arithmetic ---------------------------------------

fn exps_add(a: &Exps, b: &Exps) -> Option<Exps> {
    let mut out = [0u8; MAXV];
    for i in 0..MAXV {
        let s = a[i] as u16 + b[i] as u16;
        if s > 255 {
            return None;
        }
        out[i] = s as u8;
    }
    Some(out)
}

fn exps_sub(a: &Exps, b: &Exps) -> Exps {
    let mut out = [0u8; MAXV];
    for i in 0..MAXV {
        out[i] = a[i] - b[i];
    }
    out
}

fn exps_divides(a: &Exps, b: &Exps) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x <= y)
}

fn exps_lcm(a: &Exps, b: &Exps) -> Exps {
    let mut out = [0u8; MAXV];
    for i in 0..MAXV {
        out[i] = a[i].max(b[i]);
    }
    out
}

fn exps_coprime(a: &Exps, b: &Exps) -> bool {
    a.iter().zip(b.iter()).all(|(&x, &y)| x == 0 || y == 0)
}

fn exps_eq(a: &Exps, b: &Exps) -> bool {
    a == b
}

struct Weights {
    w: Vec<u32>,
}

impl Weights {
    fn degree(&self, e: &Exps) -> u32 {
        let mut acc = 0;
        for (i, &wi) in self.w.iter().enumerate() {
            acc += e[i] as u32 * wi;
        }
        acc
    }
}

struct GElem {
    lm: Exps,
    lm_key: Key,
    /// bit i set when variable i appears in the leading monomial; a divisor
    ///的 support must be contained in the target's
    lm_mask: u64,
    /// tail of the monic element, descending by key
    tail: Vec<(Exps, Scalar)>,
    sugar: u32,
}

fn support_mask(e: &Exps) -> u64 {
    let mut m = 0u64;
    for (i, &x) in e.iter().enumerate().take(64) {
        if x > 0 {
            m |= 1 << i;
        }
    }
    m
}

struct Run<'a> {
    codec: &'a Codec,
    weights: Weights,
    deadline_start: Instant,
    max_seconds: u64,
    stats: GbStats,
}

impl<'a> Run<'a> {
    fn expired(&self) -> bool {
        self.max_seconds != u64::MAX && self.deadline_start.elapsed().as_secs() >= self.max_seconds
    }

    /// Full normal form via in-place map updates; only touched terms cost.
    /// Returns the reduced terms (descending) and the sugar reached, or
    /// `None` on deadline.
    fn reduce_full(
        &mut self,
        mut map: BTreeMap<Key, Scalar>,
        mut sugar: u32,
        basis: &[GElem],
    ) -> Option<(Vec<(Exps, Scalar)>, u32)> {
        let mut bound: Option<Key> = None;
        loop {
            let next = match &bound {
                None => map.iter().next_back(),
                Some(b) => map.range(..b.clone()).next_back(),
            };
            let Some((k, _)) = next else { break };
            let k = *k;
            let exps = self.codec.decode(&k);
            let mask = support_mask(&exps);
            let hit = basis
                .iter()
                .find(|g| g.lm_mask & !mask == 0 && exps_divides(&g.lm, &exps));
            let Some(g) = hit else {
                bound = Some(k);
                continue;
            };
            self.stats.reduction_steps += 1;
            if self.stats.reduction_steps % 1024 == 0 && self.expired() {
                return None;
            }
            let q = exps_sub(&exps, &g.lm);
            sugar = sugar.max(g.sugar + self.weights.degree(&q));
            let factor = map.remove(&k).expect("cursor entry exists");
            for (te, tc) in &g.tail {
                let Some(prod) = exps_add(&q, te) else {
                    return None; // exponent overflow: abort to fallback
                };
                let Some(pk) = self.codec.encode(&prod) else {
                    return None;
                };
                let delta = tc * &factor;
                match map.entry(pk) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let v = e.get() - &delta;
                        if v.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = v;
                        }
                    }
                }
            }
            bound = Some(k);
        }
        let out: Vec<(Exps, Scalar)> = map
            .into_iter()
            .rev()
            .map(|(k, c)| (self.codec.decode(&k), c))
            .collect();
        Some((out, sugar))
    }

    fn spoly_map(&self, f: &GElem, g: &GElem) -> Option<(BTreeMap<Key, Scalar>, u32)> {
        let u = exps_lcm(&f.lm, &g.lm);
        let qf = exps_sub(&u, &f.lm);
        let qg = exps_sub(&u, &g.lm);
        let mut map: BTreeMap<Key, Scalar> = BTreeMap::new();
        let mut put = |key: Key, c: Scalar| match map.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        };
        for (te, tc) in &f.tail {
            let prod = exps_add(&qf, te)?;
            put(self.codec.encode(&prod)?, tc.clone());
        }
        for (te, tc) in &g.tail {
            let prod = exps_add(&qg, te)?;
            put(self.codec.encode(&prod)?, -tc.clone());
        }
        let sugar = (f.sugar + self.weights.degree(&qf)).max(g.sugar + self.weights.degree(&qg));
        Some((map, sugar))
    }
}

#[derive(Clone, PartialEq, Eq)]
struct Pair {
    sugar: u32,
    idx: u64,
    i: usize,
    j: usize,
    lcm: Exps,
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

pub(crate) struct FastOutcome {
    pub elements: Vec<Polynomial>,
    pub complete: bool,
    pub stats: GbStats,
}

fn elem_from_terms(
    codec: &Codec,
    terms: Vec<(Exps, Scalar)>,
    sugar: u32,
) -> Option<GElem> {
    let (lm, lc) = terms.first()?.clone();
    let lm_key = codec.encode(&lm)?;
    let tail: Vec<(Exps, Scalar)> = terms
        .into_iter()
        .skip(1)
        .map(|(e, c)| (e, &c / &lc))
        .collect();
    Some(GElem {
        lm,
        lm_key,
        lm_mask: support_mask(&lm),
        tail,
        sugar,
    })
}

fn poly_terms_desc(codec: &Codec, p: &Polynomial) -> Option<Vec<(Exps, Scalar)>> {
    let mut v: Vec<(Key, Exps, Scalar)> = Vec::with_capacity(p.num_terms());
    for (m, c) in p.terms() {
        let e = codec.mono_to_exps(m)?;
        v.push((codec.encode(&e)?, e, c.clone()));
    }
    v.sort_by(|a, b| b.0.cmp(&a.0));
    Some(v.into_iter().map(|(_, e, c)| (e, c)).collect())
}

fn gelem_to_polynomial(codec: &Codec, reg: &Arc<VariableRegistry>, g: &GElem) -> Polynomial {
    let mut terms: Vec<(Monomial, Scalar)> = vec![(codec.exps_to_mono(&g.lm), scalar::one())];
    for (e, c) in &g.tail {
        terms.push((codec.exps_to_mono(e), c.clone()));
    }
    Polynomial::from_terms(reg, terms)
}

/// Attempts the whole run on the packed path; `None` means the caller must
/// fall back to the generic engine (unsupported order, too many variables,
/// or exponent overflow mid-run).
/// Target Hilbert function for Hilbert-driven pruning: the quotient by the
/// ideal is known to be a free polynomial ring on `free_rank` weight-one
/// variables (true for every graph ideal `T_i - g_i`), so at weighted
/// degree `d` it has exactly `C(d + free_rank - 1, free_rank - 1)`
/// monomials.
fn hilbert_target(free_rank: u32, d: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    if free_rank == 0 {
        return if d == 0 { acc } else { BigInt::from(0) };
    }
    let k = (free_rank - 1) as u64;
    for i in 0..k {
        acc *= BigInt::from(d as u64 + k - i);
    }
    for i in 1..=k {
        acc /= BigInt::from(i);
    }
    acc
}

pub(crate) fn try_buchberger(
    registry: &Arc<VariableRegistry>,
    generators: &[Polynomial],
    order: &TermOrder,
    budget: &Budget,
    sugar_weights: &SugarWeights,
    hilbert_free_rank: Option<u32>,
) -> Option<FastOutcome> {
    let codec = Codec::build(order, registry.num_vars())?;
    let weights = Weights {
        w: (0..registry.num_vars())
            .map(|v| sugar_weights.weight_of(v))
            .collect(),
    };
    let mut run = Run {
        codec: &codec,
        weights,
        deadline_start: Instant::now(),
        max_seconds: budget.max_seconds,
        stats: GbStats::default(),
    };
    let mut basis: Vec<GElem> = Vec::new();
    let mut pairs: BTreeSet<Pair> = BTreeSet::new();
    let mut pair_counter = 0u64;
    let mut complete = true;
    // Hilbert-driven pruning applies only when every generator is
    // homogeneous under the sugar weights (then sugar = exact degree).
    let driver_rank = hilbert_free_rank.filter(|_| {
        generators.iter().filter(|g| !g.is_zero()).all(|g| {
            let mut degs = g.terms().map(|(m, _)| {
                m.exps()
                    .iter()
                    .map(|&(v, e)| e * sugar_weights.weight_of(v))
                    .sum::<u32>()
            });
            let first = degs.next().unwrap_or(0);
            degs.all(|d| d == first)
        })
    });
    let mut active_degree: Option<u32> = None;
    let mut degree_closed = false;

    fn add_element(
        h: GElem,
        basis: &mut Vec<GElem>,
        pairs: &mut BTreeSet<Pair>,
        pair_counter: &mut u64,
        weights: &Weights,
    ) {
        let t = basis.len();
        let lm_t = h.lm;
        let candidates: Vec<(usize, Exps)> = (0..t)
            .map(|i| (i, exps_lcm(&basis[i].lm, &lm_t)))
            .collect();
        let mut kept: Vec<(usize, Exps, bool)> = Vec::new();
        for (pos, (i, lcm_i)) in candidates.iter().enumerate() {
            let coprime = exps_coprime(&basis[*i].lm, &lm_t);
            let dominated = candidates.iter().enumerate().any(|(p2, (_, l2))| {
                p2 > pos && !exps_eq(l2, lcm_i) && exps_divides(l2, lcm_i)
            }) || kept.iter().any(|(_, l2, _)| exps_divides(l2, lcm_i));
            if !dominated {
                kept.push((*i, *lcm_i, coprime));
            }
        }
        pairs.retain(|p| {
            !(exps_divides(&lm_t, &p.lcm)
                && !exps_eq(&exps_lcm(&basis[p.i].lm, &lm_t), &p.lcm)
                && !exps_eq(&exps_lcm(&basis[p.j].lm, &lm_t), &p.lcm))
        });
        for (i, lcm, coprime) in kept {
            if coprime {
                continue;
            }
            let qi = weights.degree(&exps_sub(&lcm, &basis[i].lm));
            let qt = weights.degree(&exps_sub(&lcm, &lm_t));
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

    for g in generators {
        if g.is_zero() {
            continue;
        }
        let terms = poly_terms_desc(&codec, g)?;
        let sugar = terms
            .iter()
            .map(|(e, _)| run.weights.degree(e))
            .max()
            .unwrap_or(0);
        let h = elem_from_terms(&codec, terms, sugar)?;
        add_element(h, &mut basis, &mut pairs, &mut pair_counter, &run.weights);
    }

    let debug = std::env::var("HFB_GB_DEBUG").is_ok();
    while let Some(pair) = pairs.iter().next().cloned() {
        pairs.remove(&pair);
        if run.stats.pairs_processed >= budget.max_pairs || run.expired() {
            complete = false;
            break;
        }
        if driver_rank.is_some() && active_degree != Some(pair.sugar) {
            active_degree = Some(pair.sugar);
            degree_closed = in_degree_complete(
                &run,
                &basis,
                driver_rank.unwrap(),
                pair.sugar,
            );
        }
        if degree_closed {
            continue; // certified: this degree's remaining pairs reduce to zero
        }
        run.stats.pairs_processed += 1;
        if debug && run.stats.pairs_processed % 500 == 0 {
            let max_terms = basis.iter().map(|g| g.tail.len() + 1).max().unwrap_or(0);
            eprintln!(
                "[fast] pairs={} queue={} basis={} max_terms={} red={} sugar={}",
                run.stats.pairs_processed,
                pairs.len(),
                basis.len(),
                max_terms,
                run.stats.reduction_steps,
                pair.sugar
            );
        }
        let Some((smap, ssugar)) = run.spoly_map(&basis[pair.i], &basis[pair.j]) else {
            return None; // overflow: let the generic engine handle it
        };
        let Some((terms, sugar)) = run.reduce_full(smap, ssugar, &basis) else {
            // deadline inside a reduction
            complete = false;
            break;
        };
        if terms.is_empty() {
            continue;
        }
        run.stats.max_degree = run.stats.max_degree.max(
            terms[0].0.iter().map(|&e| e as u32).sum::<u32>(),
        );
        let h = elem_from_terms(&codec, terms, sugar)?;
        add_element(h, &mut basis, &mut pairs, &mut pair_counter, &run.weights);
        if let (Some(rank), Some(d)) = (driver_rank, active_degree) {
            degree_closed = in_degree_complete(&run, &basis, rank, d);
        }
    }

    let elements = if complete {
        inter_reduce_fast(&mut run, basis, registry)?
    } else {
        let mut els: Vec<(Key, Polynomial)> = basis
            .iter()
            .map(|g| (g.lm_key, gelem_to_polynomial(&codec, registry, g)))
            .collect();
        els.sort_by(|a, b| a.0.cmp(&b.0));
        els.into_iter().map(|(_, p)| p).collect()
    };
    Some(FastOutcome {
        elements,
        complete,
        stats: run.stats,
    })
}

/// Does the leading-term ideal already account for the full Hilbert
/// function at weighted degree `d`? If so, no further degree-`d` leading
/// terms can exist and the remaining degree-`d` pairs reduce to zero.
fn in_degree_complete(run: &Run, basis: &[GElem], free_rank: u32, d: u32) -> bool {
    let lms: Vec<Monomial> = basis.iter().map(|g| run.codec.exps_to_mono(&g.lm)).collect();
    let Ok(numerator) = hilbert_numerator_weighted(&lms, &run.weights.w) else {
        return false;
    };
    let actual = weighted_series_value(&numerator, &run.weights.w, d);
    actual == hilbert_target(free_rank, d)
}

/// Minimalize leading terms, then reduce each survivor fully against the
/// others until stable: the unique reduced basis, monic.
fn inter_reduce_fast(
    run: &mut Run,
    basis: Vec<GElem>,
    registry: &Arc<VariableRegistry>,
) -> Option<Vec<Polynomial>> {
    let codec = run.codec;
    let mut order_idx: Vec<usize> = (0..basis.len()).collect();
    order_idx.sort_by(|&a, &b| basis[a].lm_key.cmp(&basis[b].lm_key));
    let mut kept: Vec<GElem> = Vec::new();
    for i in order_idx {
        if !kept.iter().any(|k| exps_divides(&k.lm, &basis[i].lm)) {
            kept.push(GElem {
                lm: basis[i].lm,
                lm_key: basis[i].lm_key,
                lm_mask: basis[i].lm_mask,
                tail: basis[i].tail.clone(),
                sugar: basis[i].sugar,
            });
        }
    }
    run.max_seconds = u64::MAX; // final cleanup is not budgeted
    loop {
        let mut changed = false;
        for i in 0..kept.len() {
            // reduce the tail of kept[i] against the other elements
            let mut map: BTreeMap<Key, Scalar> = BTreeMap::new();
            for (e, c) in &kept[i].tail {
                map.insert(codec.encode(e)?, c.clone());
            }
            let others: Vec<&GElem> = kept
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g)
                .collect();
            let mut bound: Option<Key> = None;
            loop {
                let next = match &bound {
                    None => map.iter().next_back(),
                    Some(b) => map.range(..b.clone()).next_back(),
                };
                let Some((k, _)) = next else { break };
                let k = *k;
                let exps = codec.decode(&k);
                let mask = support_mask(&exps);
                let hit = others
                    .iter()
                    .find(|g| g.lm_mask & !mask == 0 && exps_divides(&g.lm, &exps));
                let Some(g) = hit else {
                    bound = Some(k);
                    continue;
                };
                run.stats.reduction_steps += 1;
                let q = exps_sub(&exps, &g.lm);
                let factor = map.remove(&k).expect("entry exists");
                for (te, tc) in &g.tail {
                    let prod = exps_add(&q, te)?;
                    let pk = codec.encode(&prod)?;
                    let delta = tc * &factor;
                    match map.entry(pk) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            e.insert(-delta);
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            let v = e.get() - &delta;
                            if v.is_zero() {
                                e.remove();
                            } else {
                                *e.get_mut() = v;
                            }
                        }
                    }
                }
                bound = Some(k);
            }
            let new_tail: Vec<(Exps, Scalar)> = map
                .into_iter()
                .rev()
                .map(|(k, c)| (codec.decode(&k), c))
                .collect();
            if new_tail != kept[i].tail {
                changed = true;
                kept[i].tail = new_tail;
            }
        }
        if !changed {
            break;
        }
    }
    let mut out: Vec<(Key, Polynomial)> = kept
        .iter()
        .map(|g| (g.lm_key, gelem_to_polynomial(codec, registry, g)))
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Some(out.into_iter().map(|(_, p)| p).collect())
}

/// Packed-path normal form against a complete monic basis; `None` when the
/// packing does not apply.
pub(crate) fn try_normal_form(
    p: &Polynomial,
    elements: &[Polynomial],
    order: &TermOrder,
    registry: &Arc<VariableRegistry>,
) -> Option<Polynomial> {
    let codec = Codec::build(order, registry.num_vars())?;
    let mut basis = Vec::with_capacity(elements.len());
    for e in elements {
        let terms = poly_terms_desc(&codec, e)?;
        basis.push(elem_from_terms(&codec, terms, 0)?);
    }
    let mut map: BTreeMap<Key, Scalar> = BTreeMap::new();
    for (m, c) in p.terms() {
        let e = codec.mono_to_exps(m)?;
        map.insert(codec.encode(&e)?, c.clone());
    }
    let weights = Weights {
        w: vec![1; registry.num_vars() as usize],
    };
    let mut run = Run {
        codec: &codec,
        weights,
        deadline_start: Instant::now(),
        max_seconds: u64::MAX,
        stats: GbStats::default(),
    };
    let (terms, _) = run.reduce_full(map, 0, &basis)?;
    let mono_terms: Vec<(Monomial, Scalar)> = terms
        .into_iter()
        .map(|(e, c)| (codec.exps_to_mono(&e), c))
        .collect();
    Some(Polynomial::from_terms(registry, mono_terms))
}
