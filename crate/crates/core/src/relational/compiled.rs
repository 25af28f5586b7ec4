use std::collections::HashMap;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

use super::{satisfies_fd, support, Instance, TupleSet};
use crate::error::{Error, Result};
use crate::graph::IndependentSets;

/// Index-based view of an instance for repeated subset checks.
///
/// FD violations are pairwise, so they are stored as a conflict graph; each
/// inclusion dependency becomes, per source tuple, the bitset of its supporters.
#[derive(Debug, Clone)]
pub struct CompiledInstance {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    conflicts: Vec<FixedBitSet>,
    requirements: Vec<Vec<FixedBitSet>>,
    has_ids: bool,
}

impl CompiledInstance {
    pub fn new(inst: &Instance) -> Result<Self> {
        let db = inst.database();
        let ids: Vec<String> = db.tuples().map(|t| t.id().to_string()).collect();
        let n = ids.len();
        let index: HashMap<String, usize> =
            ids.iter().enumerate().map(|(k, id)| (id.clone(), k)).collect();

        let mut conflicts = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for b in a + 1..n {
                let pair: TupleSet = [ids[a].clone(), ids[b].clone()].into();
                for d in inst.fds() {
                    if !satisfies_fd(db, &pair, d)? {
                        conflicts[a].insert(b);
                        conflicts[b].insert(a);
                        break;
                    }
                }
            }
        }

        let mut requirements = vec![Vec::new(); n];
        for i in inst.ids() {
            for s in db.tuples().filter(|t| t.relation() == i.source_relation()) {
                let mut mask = FixedBitSet::with_capacity(n);
                for t in support(db, s.id(), i)? {
                    mask.insert(index[&t]);
                }
                requirements[index[s.id()]].push(mask);
            }
        }

        Ok(CompiledInstance {
            ids,
            index,
            conflicts,
            requirements,
            has_ids: inst.has_ids(),
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn mask_of(&self, subset: &TupleSet) -> Result<FixedBitSet> {
        let mut mask = FixedBitSet::with_capacity(self.len());
        for id in subset {
            let k = self
                .index_of(id)
                .ok_or_else(|| Error::Domain(format!("unknown tuple id `{id}`")))?;
            mask.insert(k);
        }
        Ok(mask)
    }

    pub fn ids_of(&self, mask: &FixedBitSet) -> TupleSet {
        mask.ones().map(|k| self.ids[k].clone()).collect()
    }

    pub fn conflicts(&self) -> &[FixedBitSet] {
        &self.conflicts
    }

    /// Supporter sets tuple `k` needs to meet, one per applicable inclusion dependency.
    pub fn requirements(&self, k: usize) -> &[FixedBitSet] {
        &self.requirements[k]
    }

    pub fn is_consistent(&self, mask: &FixedBitSet) -> bool {
        mask.ones().all(|k| {
            self.conflicts[k].is_disjoint(mask)
                && self.requirements[k].iter().all(|req| !req.is_disjoint(mask))
        })
    }

    /// Largest subset of `mask` satisfying every inclusion dependency. Sets
    /// satisfying the IDs are closed under union, so this is well defined.
    pub fn greatest_id_closed(&self, mask: &FixedBitSet) -> FixedBitSet {
        let mut current = mask.clone();
        loop {
            let doomed: Vec<usize> = current
                .ones()
                .filter(|&k| self.requirements[k].iter().any(|req| req.is_disjoint(&current)))
                .collect();
            if doomed.is_empty() {
                return current;
            }
            for k in doomed {
                current.set(k, false);
            }
        }
    }

    /// Whether some consistent strict superset of the consistent set `mask` exists.
    ///
    /// Any such superset adds tuples free of FD conflicts with `mask`, hence
    /// lies inside `mask ∪ M` for a maximal conflict-free set `M` of those
    /// candidates; the ID-closure of `mask ∪ M` then witnesses it.
    pub fn has_consistent_strict_superset(&self, mask: &FixedBitSet) -> bool {
        let mut candidates = FixedBitSet::with_capacity(self.len());
        for k in 0..self.len() {
            if !mask.contains(k) && self.conflicts[k].is_disjoint(mask) {
                candidates.insert(k);
            }
        }
        if candidates.is_clear() {
            return false;
        }
        if !self.has_ids {
            return true;
        }
        let base = mask.count_ones(..);
        let flow = IndependentSets::new(&self.conflicts).run(&candidates, &mut |extra| {
            let mut grown = mask.clone();
            grown.extend(extra.iter().copied());
            if self.greatest_id_closed(&grown).count_ones(..) > base {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        flow.is_break()
    }
}
