//! Index-set combinatorics of the Grassmannians Gr(n, n+2) and Gr(2, n+2):
//! three-term Plücker relations, the minor poset, and the duality
//! isomorphism identifying the two T-rings.

use crate::error::Error;
use crate::index_set::{IndexSet, PosetRel};
use crate::poly::Polynomial;
use crate::scalar;
use crate::vars::{VarId, VariableRegistry};
use crate::Result;
use std::collections::BTreeMap;
use std::sync::Arc;

/// The T-ring of Gr(k, ambient): one variable per k-subset.
pub fn grassmann_registry(ambient: u32, k: usize) -> Arc<VariableRegistry> {
    VariableRegistry::grassmann(ambient, k)
}

/// All nontrivial three-term Plücker quadrics of Gr(k, ambient):
/// for a four-element window `a<b<c<d` and a disjoint `I` of size `k-2`,
/// `T_{I∪{a,b}}T_{I∪{c,d}} - T_{I∪{a,c}}T_{I∪{b,d}} + T_{I∪{a,d}}T_{I∪{b,c}}`.
pub fn three_term_plucker(
    registry: &Arc<VariableRegistry>,
    ambient: u32,
    k: usize,
) -> Result<Vec<Polynomial>> {
    if k < 2 {
        return Err(Error::InvalidConfig("Plücker relations need k >= 2".into()));
    }
    let mut out = Vec::new();
    for quad in IndexSet::all_subsets(ambient, 4) {
        let rest = quad.complement();
        for i_set in subsets_of(&rest, k - 2) {
            let q = quad.elems();
            let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
            let pair = |u: u32, v: u32| -> Result<VarId> {
                let s = i_set.union(&IndexSet::new(ambient, vec![u, v])?)?;
                registry.t_var(&s)
            };
            let mut p = Polynomial::zero(registry);
            let terms = [
                (pair(a, b)?, pair(c, d)?, 1i64),
                (pair(a, c)?, pair(b, d)?, -1),
                (pair(a, d)?, pair(b, c)?, 1),
            ];
            for (u, v, sg) in terms {
                let m = crate::monomial::Monomial::from_pairs(&[(u, 1), (v, 1)]);
                p.add_term(m, scalar::from_int(sg));
            }
            out.push(p);
        }
    }
    Ok(out)
}

fn subsets_of(set: &IndexSet, k: usize) -> Vec<IndexSet> {
    let elems = set.elems();
    let mut out = Vec::new();
    let idx_sets = IndexSet::all_subsets(elems.len() as u32, k);
    for pick in idx_sets {
        let chosen: Vec<u32> = pick.elems().iter().map(|&i| elems[(i - 1) as usize]).collect();
        out.push(IndexSet::new(set.ambient(), chosen).expect("sorted subset"));
    }
    out
}

/// The Plücker relations of Gr(n, n+2); there are `C(n+2, 4)` of them and
/// they generate the whole Plücker ideal.
pub fn plucker_relations(n: u32) -> Result<(Arc<VariableRegistry>, Vec<Polynomial>)> {
    if n < 2 {
        return Err(Error::InvalidConfig("n must be >= 2".into()));
    }
    let reg = grassmann_registry(n + 2, n as usize);
    let rels = three_term_plucker(&reg, n + 2, n as usize)?;
    Ok((reg, rels))
}

/// Same for the dual side Gr(2, n+2).
pub fn plucker_relations_dual(n: u32) -> Result<(Arc<VariableRegistry>, Vec<Polynomial>)> {
    let reg = grassmann_registry(n + 2, 2);
    let rels = three_term_plucker(&reg, n + 2, 2)?;
    Ok((reg, rels))
}

/// The poset isomorphism `T_i ↦ T_{σ(i^c)}` between the minor posets of
/// Gr(n, n+2) and Gr(2, n+2), with its inverse.
pub struct PosetIso {
    pub n: u32,
    source: Arc<VariableRegistry>,
    target: Arc<VariableRegistry>,
    forward: BTreeMap<VarId, VarId>,
    inverse: BTreeMap<VarId, VarId>,
}

impl PosetIso {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidConfig("n must be >= 2".into()));
        }
        let source = grassmann_registry(n + 2, n as usize);
        let target = grassmann_registry(n + 2, 2);
        let mut forward = BTreeMap::new();
        let mut inverse = BTreeMap::new();
        for s in source.t_sets() {
            let img = s.complement().sigma();
            let from = source.t_var(s)?;
            let to = target.t_var(&img)?;
            forward.insert(from, to);
            inverse.insert(to, from);
        }
        Ok(PosetIso {
            n,
            source,
            target,
            forward,
            inverse,
        })
    }

    pub fn source(&self) -> &Arc<VariableRegistry> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VariableRegistry> {
        &self.target
    }

    pub fn image_set(&self, s: &IndexSet) -> IndexSet {
        s.complement().sigma()
    }

    /// Relabels variables through the isomorphism; coefficients unchanged.
    pub fn phi(&self, p: &Polynomial) -> Result<Polynomial> {
        if !VariableRegistry::same(p.registry(), &self.source) {
            return Err(Error::RegistryMismatch);
        }
        p.map_registry(&self.target, |v| {
            self.forward
                .get(&v)
                .copied()
                .ok_or_else(|| Error::ForeignVariable(self.source.label(v)))
        })
    }

    pub fn phi_inverse(&self, p: &Polynomial) -> Result<Polynomial> {
        if !VariableRegistry::same(p.registry(), &self.target) {
            return Err(Error::RegistryMismatch);
        }
        p.map_registry(&self.source, |v| {
            self.inverse
                .get(&v)
                .copied()
                .ok_or_else(|| Error::ForeignVariable(self.target.label(v)))
        })
    }
}

/// Componentwise comparison of two minors in the poset.
pub fn poset_compare(a: &IndexSet, b: &IndexSet) -> Result<PosetRel> {
    a.poset_cmp(b)
}

/// Covering relations of the poset of k-subsets of `[ambient]`: `b` covers
/// `a` exactly when `a ≼ b` and the index sums differ by one.
pub fn hasse_edges(ambient: u32, k: usize) -> Vec<(IndexSet, IndexSet)> {
    let nodes = IndexSet::all_subsets(ambient, k);
    let mut edges = Vec::new();
    for a in &nodes {
        for b in &nodes {
            if b.sum() == a.sum() + 1
                && matches!(a.poset_cmp(b), Ok(PosetRel::LessEqual))
            {
                edges.push((a.clone(), b.clone()));
            }
        }
    }
    edges
}

/// DOT rendering of the Hasse diagram (for the figures pipeline).
pub fn hasse_dot(ambient: u32, k: usize) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n");
    for s in IndexSet::all_subsets(ambient, k) {
        out.push_str(&format!("  \"{s}\";\n"));
    }
    for (a, b) in hasse_edges(ambient, k) {
        out.push_str(&format!("  \"{a}\" -> \"{b}\";\n"));
    }
    out.push_str("}\n");
    out
}
