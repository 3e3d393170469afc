//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms live in a `BTreeMap` keyed by monomial, which gives a canonical
//! form: equality is structural, zero coefficients are never stored, and
//! display order is graded reverse lex. Every polynomial carries its
//! variable registry; mixing registries is an error.

use crate::error::Error;
use crate::monomial::Monomial;
use crate::order::TermOrder;
use crate::scalar::{self, Scalar};
use crate::vars::{VarId, VariableRegistry};
use crate::Result;
use num::traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone)]
pub struct Polynomial {
    registry: Arc<VariableRegistry>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(registry: &Arc<VariableRegistry>) -> Self {
        Polynomial {
            registry: registry.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(registry: &Arc<VariableRegistry>, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial {
            registry: registry.clone(),
            terms,
        }
    }

    pub fn one(registry: &Arc<VariableRegistry>) -> Self {
        Self::constant(registry, scalar::one())
    }

    pub fn var(registry: &Arc<VariableRegistry>, v: VarId) -> Self {
        assert!(v < registry.num_vars(), "variable out of registry range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), scalar::one());
        Polynomial {
            registry: registry.clone(),
            terms,
        }
    }

    pub fn term(registry: &Arc<VariableRegistry>, m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            registry: registry.clone(),
            terms,
        }
    }

    pub fn from_terms(
        registry: &Arc<VariableRegistry>,
        it: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Self {
        let mut p = Self::zero(registry);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn registry(&self) -> &Arc<VariableRegistry> {
        &self.registry
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(scalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_same_registry(&self, other: &Self) -> Result<()> {
        if VariableRegistry::same(&self.registry, &other.registry) {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_registry(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_registry(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_registry(other)?;
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = Self::zero(&self.registry);
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), -c.clone()))
            .collect();
        Polynomial {
            registry: self.registry.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.registry);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, k)| (m.clone(), k * c))
            .collect();
        Polynomial {
            registry: self.registry.clone(),
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.registry);
        for _ in 0..e {
            acc = acc.checked_mul(self).expect("same registry");
        }
        acc
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// `Some(d)` when every term has total degree `d` (zero counts as
    /// homogeneous of degree 0).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = match it.next() {
            None => return Some(0),
            Some(m) => m.degree(),
        };
        for m in it {
            if m.degree() != d {
                return None;
            }
        }
        Some(d)
    }

    /// `(x-degree, T-degree)` when the polynomial is bihomogeneous with
    /// respect to the registry's ground/T split.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let reg = &self.registry;
        let mut it = self.terms.keys();
        let first = it.next()?;
        let dx = first.degree_where(|v| reg.is_x(v));
        let dt = first.degree_where(|v| reg.is_t(v));
        for m in it {
            if m.degree_where(|v| reg.is_x(v)) != dx || m.degree_where(|v| reg.is_t(v)) != dt {
                return None;
            }
        }
        Some((dx, dt))
    }

    /// Leading term under the given order.
    pub fn leading(&self, order: &TermOrder) -> Option<(&Monomial, &Scalar)> {
        let mut best: Option<(&Monomial, &Scalar)> = None;
        for (m, c) in &self.terms {
            match best {
                None => best = Some((m, c)),
                Some((bm, _)) => {
                    if order.cmp(m, bm) == std::cmp::Ordering::Greater {
                        best = Some((m, c));
                    }
                }
            }
        }
        best
    }

    /// Substitutes polynomials for variables. Variables missing from the
    /// assignment fall back to themselves, which is only legal when the
    /// target registry equals the source registry.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<VarId, Polynomial>,
        target: &Arc<VariableRegistry>,
    ) -> Result<Polynomial> {
        for img in assignment.values() {
            if !VariableRegistry::same(img.registry(), target) {
                return Err(Error::RegistryMismatch);
            }
        }
        // per-variable power cache
        let mut max_exp: BTreeMap<VarId, u32> = BTreeMap::new();
        for m in self.terms.keys() {
            for &(v, e) in m.exps() {
                let cur = max_exp.entry(v).or_insert(0);
                *cur = (*cur).max(e);
            }
        }
        let mut powers: BTreeMap<VarId, Vec<Polynomial>> = BTreeMap::new();
        for (&v, &maxe) in &max_exp {
            let base = match assignment.get(&v) {
                Some(p) => p.clone(),
                None => {
                    if !VariableRegistry::same(&self.registry, target) {
                        return Err(Error::UnassignedVariable(self.registry.label(v)));
                    }
                    Polynomial::var(target, v)
                }
            };
            let mut pows = Vec::with_capacity(maxe as usize + 1);
            pows.push(Polynomial::one(target));
            for e in 1..=maxe {
                let next = pows[(e - 1) as usize].checked_mul(&base)?;
                pows.push(next);
            }
            powers.insert(v, pows);
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut term_val = Polynomial::constant(target, c.clone());
            for &(v, e) in m.exps() {
                term_val = term_val.checked_mul(&powers[&v][e as usize])?;
            }
            out = out.checked_add(&term_val)?;
        }
        Ok(out)
    }

    /// Full evaluation at a rational point indexed by variable id.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if (point.len() as u32) < self.registry.num_vars() {
            return Err(Error::OutOfRange("evaluation point too short".into()));
        }
        let mut acc = scalar::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for &(var, e) in m.exps() {
                let mut p = scalar::one();
                for _ in 0..e {
                    p = &p * &point[var as usize];
                }
                v = &v * &p;
            }
            acc = &acc + &v;
        }
        Ok(acc)
    }

    pub fn differentiate(&self, v: VarId) -> Polynomial {
        let mut out = Polynomial::zero(&self.registry);
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let reduced = Monomial::var(v).quotient_into(m);
            out.add_term(reduced, c * scalar::from_int(e as i64));
        }
        out
    }

    /// Rebuilds the polynomial in another registry through a variable map.
    pub fn map_registry(
        &self,
        target: &Arc<VariableRegistry>,
        var_map: impl Fn(VarId) -> Result<VarId>,
    ) -> Result<Polynomial> {
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut pairs = Vec::with_capacity(m.exps().len());
            for &(v, e) in m.exps() {
                pairs.push((var_map(v)?, e));
            }
            out.add_term(Monomial::from_pairs(&pairs), c.clone());
        }
        Ok(out)
    }

    /// Exact division: returns `self / divisor` or an error when the
    /// division leaves a remainder. Used by the fraction-free determinant.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial> {
        self.check_same_registry(divisor)?;
        if divisor.is_zero() {
            return Err(Error::InexactDivision);
        }
        let order = TermOrder::grevlex();
        let (dlm, dlc) = divisor.leading(&order).expect("divisor nonzero");
        let dlm = dlm.clone();
        let dlc = dlc.clone();
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(&self.registry);
        while !rem.is_zero() {
            let (rlm, rlc) = rem.leading(&order).expect("nonzero");
            if !dlm.divides(rlm) {
                return Err(Error::InexactDivision);
            }
            let qm = dlm.quotient_into(rlm);
            let qc = rlc / &dlc;
            let qterm = Polynomial::term(&self.registry, qm, qc);
            rem = rem.checked_sub(&qterm.checked_mul(divisor)?)?;
            quot = quot.checked_add(&qterm)?;
        }
        Ok(quot)
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        VariableRegistry::same(&self.registry, &other.registry) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parse::format_polynomial(self))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parse::format_polynomial(self))
    }
}

macro_rules! binop {
    ($trait:ident, $fn:ident, $checked:ident) => {
        impl std::ops::$trait for &Polynomial {
            type Output = Polynomial;
            fn $fn(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("registry mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}
