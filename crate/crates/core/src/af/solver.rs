use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

use super::labelling::{Goal, LabellingSearch};
use super::{ArgFramework, ArgSet, Extension, Semantics};
use crate::error::Result;
use crate::graph::IndependentSets;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverOptions {
    /// Report `∅` as an extension when the semantics admits it.
    pub allow_empty: bool,
    /// Skeptical acceptance holds when there is no extension at all.
    pub vacuous_skeptical: bool,
}

/// Extension enumeration and acceptance queries over one framework.
///
/// Keeps a running count of search nodes across calls.
pub struct Solver<'a> {
    af: &'a ArgFramework,
    options: SolverOptions,
    nodes: u64,
}

impl<'a> Solver<'a> {
    pub fn new(af: &'a ArgFramework) -> Self {
        Self::with_options(af, SolverOptions::default())
    }

    pub fn with_options(af: &'a ArgFramework, options: SolverOptions) -> Self {
        Solver {
            af,
            options,
            nodes: 0,
        }
    }

    pub fn framework(&self) -> &'a ArgFramework {
        self.af
    }

    pub fn search_nodes(&self) -> u64 {
        self.nodes
    }

    /// All extensions under `sem`, in canonical order.
    pub fn enumerate(&mut self, sem: Semantics) -> Vec<Extension> {
        let mut sets = match sem {
            Semantics::ConflictFree => self.conflict_free_sets(),
            Semantics::Naive => self.naive_sets(),
            Semantics::Stable => {
                let naive = self.naive_sets();
                naive.into_iter().filter(|s| self.attacks_rest(s)).collect()
            }
            Semantics::Admissible => {
                let mut search = LabellingSearch::new(self.af, Goal::All(Vec::new()));
                let _ = search.run(search.initial());
                self.nodes += search.nodes;
                let Goal::All(sets) = search.goal else { unreachable!() };
                sets.into_iter().filter(|s| !s.is_clear()).collect()
            }
            Semantics::Preferred => self.preferred_sets(),
        };
        if self.options.allow_empty && self.empty_is_extension(sem, &sets) {
            sets.push(FixedBitSet::with_capacity(self.af.len()));
        }
        self.canonical(sets)
    }

    /// Whether `sem` has an extension other than `∅`.
    pub fn exists_nonempty(&mut self, sem: Semantics) -> bool {
        match sem {
            Semantics::ConflictFree | Semantics::Naive => {
                (0..self.af.len()).any(|k| !self.af.self_attacking_idx(k))
            }
            Semantics::Admissible | Semantics::Preferred => self.first_admissible(&[]).is_some(),
            Semantics::Stable => {
                let af = self.af;
                self.naive_sets()
                    .iter()
                    .any(|s| !s.is_clear() && attacks_rest(af, s))
            }
        }
    }

    /// Whether `argument` belongs to some extension under `sem`.
    pub fn credulous(&mut self, argument: &str, sem: Semantics) -> Result<bool> {
        let a = self.af.require(argument)?;
        if self.af.self_attacking_idx(a) {
            return Ok(false);
        }
        Ok(match sem {
            // every conflict-free set extends to a maximal one
            Semantics::ConflictFree | Semantics::Naive => true,
            // every admissible set extends to a preferred one
            Semantics::Admissible | Semantics::Preferred => self.first_admissible(&[a]).is_some(),
            Semantics::Stable => self
                .enumerate(Semantics::Stable)
                .iter()
                .any(|e| e.contains(argument)),
        })
    }

    /// Whether `argument` belongs to every extension under `sem`. Without any
    /// extension this is false unless `vacuous_skeptical` is set.
    pub fn skeptical(&mut self, argument: &str, sem: Semantics) -> Result<bool> {
        let a = self.af.require(argument)?;
        if sem == Semantics::Naive && !self.af.self_attacking_idx(a) {
            // Non-empty naive extensions exist, and `a` is in all of them iff
            // no acceptable argument conflicts with it.
            let af = self.af;
            let contested = af
                .attackers_idx(a)
                .iter()
                .chain(af.targets_idx(a))
                .any(|&b| b != a && !af.self_attacking_idx(b));
            return Ok(!contested);
        }
        let extensions = self.enumerate(sem);
        if extensions.is_empty() {
            return Ok(self.options.vacuous_skeptical);
        }
        Ok(extensions.iter().all(|e| e.contains(argument)))
    }

    /// A preferred extension containing `seed`, or `None` when no admissible
    /// set contains `seed`.
    pub fn extend_to_preferred(&mut self, seed: &ArgSet) -> Result<Option<Extension>> {
        let seed: Vec<usize> = self.af.indices(seed)?.into_iter().collect();
        let Some(mut current) = self.first_admissible(&seed) else {
            return Ok(None);
        };
        for b in 0..self.af.len() {
            if current.contains(b) || self.af.self_attacking_idx(b) {
                continue;
            }
            let mut forced: Vec<usize> = current.ones().collect();
            forced.push(b);
            if let Some(bigger) = self.first_admissible(&forced) {
                current = bigger;
            }
        }
        Ok(Some(self.extension(&current)))
    }

    /// Whether some naive extension has at least `k` members.
    pub fn exists_naive_of_size(&mut self, k: usize) -> bool {
        let (adjacency, vertices) = self.conflict_graph();
        let mut search = IndependentSets::new(&adjacency).with_min_size(k);
        let flow = search.run(&vertices, &mut |s| {
            if s.len() >= k {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        self.nodes += search.nodes;
        flow.is_break()
    }

    fn first_admissible(&mut self, forced: &[usize]) -> Option<FixedBitSet> {
        let mut search = LabellingSearch::new(
            self.af,
            Goal::First {
                nonempty: true,
                found: None,
            },
        );
        let mut lab = search.initial();
        for &x in forced {
            if lab[x] == super::labelling::Label::In {
                continue;
            }
            if !search.force_in(&mut lab, x) {
                return None;
            }
        }
        let _ = search.run(lab);
        self.nodes += search.nodes;
        match search.goal {
            Goal::First { found, .. } => found,
            _ => unreachable!(),
        }
    }

    fn preferred_sets(&mut self) -> Vec<FixedBitSet> {
        let mut search = LabellingSearch::new(self.af, Goal::Maximal(Vec::new()));
        let _ = search.run(search.initial());
        self.nodes += search.nodes;
        match search.goal {
            Goal::Maximal(found) => found,
            _ => unreachable!(),
        }
    }

    /// Undirected conflict graph over the arguments that do not attack themselves.
    fn conflict_graph(&self) -> (Vec<FixedBitSet>, FixedBitSet) {
        let n = self.af.len();
        let mut adjacency = vec![FixedBitSet::with_capacity(n); n];
        let mut vertices = FixedBitSet::with_capacity(n);
        for x in 0..n {
            if self.af.self_attacking_idx(x) {
                continue;
            }
            vertices.insert(x);
            for &y in self.af.targets_idx(x) {
                if y != x {
                    adjacency[x].insert(y);
                    adjacency[y].insert(x);
                }
            }
        }
        (adjacency, vertices)
    }

    fn naive_sets(&mut self) -> Vec<FixedBitSet> {
        let (adjacency, vertices) = self.conflict_graph();
        if vertices.is_clear() {
            return Vec::new();
        }
        let n = self.af.len();
        let mut out = Vec::new();
        let mut search = IndependentSets::new(&adjacency);
        let _ = search.run(&vertices, &mut |s| {
            let mut set = FixedBitSet::with_capacity(n);
            set.extend(s.iter().copied());
            out.push(set);
            ControlFlow::Continue(())
        });
        self.nodes += search.nodes;
        out
    }

    fn conflict_free_sets(&mut self) -> Vec<FixedBitSet> {
        let (adjacency, vertices) = self.conflict_graph();
        let order: Vec<usize> = vertices.ones().collect();
        let mut out = Vec::new();
        let mut current = FixedBitSet::with_capacity(self.af.len());
        self.grow_independent(&adjacency, &order, 0, &mut current, &mut out);
        out
    }

    fn grow_independent(
        &mut self,
        adjacency: &[FixedBitSet],
        order: &[usize],
        from: usize,
        current: &mut FixedBitSet,
        out: &mut Vec<FixedBitSet>,
    ) {
        self.nodes += 1;
        if !current.is_clear() {
            out.push(current.clone());
        }
        for (k, &v) in order.iter().enumerate().skip(from) {
            if adjacency[v].is_disjoint(current) {
                current.insert(v);
                self.grow_independent(adjacency, order, k + 1, current, out);
                current.set(v, false);
            }
        }
    }

    fn attacks_rest(&self, set: &FixedBitSet) -> bool {
        attacks_rest(self.af, set)
    }

    fn empty_is_extension(&self, sem: Semantics, found: &[FixedBitSet]) -> bool {
        match sem {
            Semantics::ConflictFree | Semantics::Admissible => true,
            Semantics::Naive | Semantics::Preferred => found.is_empty(),
            Semantics::Stable => self.af.is_empty(),
        }
    }

    fn extension(&self, set: &FixedBitSet) -> Extension {
        Extension::new(set.ones().map(|k| self.af.id_of(k).to_string()))
    }

    fn canonical(&self, sets: Vec<FixedBitSet>) -> Vec<Extension> {
        let mut out: Vec<Extension> = sets.iter().map(|s| self.extension(s)).collect();
        out.sort();
        out.dedup();
        out
    }
}

fn attacks_rest(af: &ArgFramework, set: &FixedBitSet) -> bool {
    (0..af.len()).all(|y| set.contains(y) || af.attackers_idx(y).iter().any(|&x| set.contains(x)))
}

pub fn enumerate_extensions(af: &ArgFramework, sem: Semantics) -> Vec<Extension> {
    Solver::new(af).enumerate(sem)
}

pub fn credulous(af: &ArgFramework, argument: &str, sem: Semantics) -> Result<bool> {
    Solver::new(af).credulous(argument, sem)
}

pub fn skeptical(af: &ArgFramework, argument: &str, sem: Semantics) -> Result<bool> {
    Solver::new(af).skeptical(argument, sem)
}

pub fn exists_nonempty_extension(af: &ArgFramework, sem: Semantics) -> bool {
    Solver::new(af).exists_nonempty(sem)
}
