//! Variable registries.
//!
//! A registry declares the ground block `x_1..x_N` followed by a `T`-block
//! indexed by sorted index sets. Registries are immutable once built;
//! polynomials hold one via `Arc` and refuse to mix registries.

use crate::error::Error;
use crate::index_set::IndexSet;
use crate::Result;
use std::collections::BTreeMap;
use std::sync::Arc;

pub type VarId = u32;

#[derive(Debug, PartialEq, Eq)]
pub struct VariableRegistry {
    x_count: u32,
    t_sets: Vec<IndexSet>,
    t_lookup: BTreeMap<IndexSet, VarId>,
}

impl VariableRegistry {
    pub fn new(x_count: u32, mut t_sets: Vec<IndexSet>) -> Result<Arc<Self>> {
        t_sets.sort();
        let mut t_lookup = BTreeMap::new();
        for (i, s) in t_sets.iter().enumerate() {
            if t_lookup.insert(s.clone(), x_count + i as u32).is_some() {
                return Err(Error::BadIndexSet(format!("duplicate T-variable {s}")));
            }
        }
        Ok(Arc::new(VariableRegistry {
            x_count,
            t_sets,
            t_lookup,
        }))
    }

    /// Ground variables only: `x_1..x_n`.
    pub fn x_only(x_count: u32) -> Arc<Self> {
        Self::new(x_count, Vec::new()).expect("no T-sets to collide")
    }

    /// `T`-variables only.
    pub fn t_only(t_sets: Vec<IndexSet>) -> Result<Arc<Self>> {
        Self::new(0, t_sets)
    }

    /// One `T`-variable per k-subset of `[ambient]`.
    pub fn grassmann(ambient: u32, k: usize) -> Arc<Self> {
        Self::new(0, IndexSet::all_subsets(ambient, k)).expect("subsets are distinct")
    }

    pub fn num_vars(&self) -> u32 {
        self.x_count + self.t_sets.len() as u32
    }

    pub fn x_count(&self) -> u32 {
        self.x_count
    }

    pub fn t_count(&self) -> u32 {
        self.t_sets.len() as u32
    }

    pub fn is_x(&self, v: VarId) -> bool {
        v < self.x_count
    }

    pub fn is_t(&self, v: VarId) -> bool {
        v >= self.x_count && v < self.num_vars()
    }

    /// 1-based ground variable `x_i`.
    pub fn x_var(&self, i: u32) -> Result<VarId> {
        if i == 0 || i > self.x_count {
            return Err(Error::OutOfRange(format!(
                "x{} (registry has {} ground variables)",
                i, self.x_count
            )));
        }
        Ok(i - 1)
    }

    pub fn t_var(&self, s: &IndexSet) -> Result<VarId> {
        self.t_lookup
            .get(s)
            .copied()
            .ok_or_else(|| Error::ForeignVariable(format!("T{s}")))
    }

    pub fn t_set(&self, v: VarId) -> Option<&IndexSet> {
        if self.is_t(v) {
            self.t_sets.get((v - self.x_count) as usize)
        } else {
            None
        }
    }

    pub fn t_sets(&self) -> &[IndexSet] {
        &self.t_sets
    }

    pub fn label(&self, v: VarId) -> String {
        if self.is_x(v) {
            format!("x{}", v + 1)
        } else if let Some(s) = self.t_set(v) {
            format!("T{s}")
        } else {
            format!("?{v}")
        }
    }

    pub fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_and_lookup() {
        let reg = VariableRegistry::new(
            3,
            vec![
                IndexSet::new(4, vec![1, 2]).unwrap(),
                IndexSet::new(4, vec![3, 4]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(reg.num_vars(), 5);
        assert_eq!(reg.label(0), "x1");
        assert_eq!(reg.label(3), "T[1,2]");
        assert_eq!(reg.x_var(3).unwrap(), 2);
        assert!(reg.x_var(4).is_err());
        let s = IndexSet::new(4, vec![3, 4]).unwrap();
        assert_eq!(reg.t_var(&s).unwrap(), 4);
    }

    #[test]
    fn duplicate_t_sets_rejected() {
        let s = IndexSet::new(4, vec![1, 2]).unwrap();
        assert!(VariableRegistry::new(0, vec![s.clone(), s]).is_err());
    }

    #[test]
    fn grassmann_registry_sorted() {
        let reg = VariableRegistry::grassmann(4, 2);
        assert_eq!(reg.t_count(), 6);
        assert_eq!(reg.label(0), "T[1,2]");
        assert_eq!(reg.label(5), "T[3,4]");
    }
}
