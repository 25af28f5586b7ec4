//! Maximal independent set enumeration (Bron–Kerbosch on the complement graph,
//! with pivoting).

use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

pub(crate) struct IndependentSets<'a> {
    adjacency: &'a [FixedBitSet],
    min_size: usize,
    pub nodes: u64,
}

impl<'a> IndependentSets<'a> {
    /// `adjacency[v]` must be symmetric and must not contain `v`.
    pub fn new(adjacency: &'a [FixedBitSet]) -> Self {
        IndependentSets {
            adjacency,
            min_size: 0,
            nodes: 0,
        }
    }

    /// Only report sets with at least `k` members, pruning branches that cannot reach `k`.
    pub fn with_min_size(mut self, k: usize) -> Self {
        self.min_size = k;
        self
    }

    /// Calls `visit` with every maximal independent set of the subgraph induced
    /// by `vertices`. Sets are reported sorted ascending.
    pub fn run<F>(&mut self, vertices: &FixedBitSet, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let mut chosen = Vec::new();
        let excluded = FixedBitSet::with_capacity(vertices.len());
        self.expand(&mut chosen, vertices.clone(), excluded, visit)
    }

    fn expand<F>(
        &mut self,
        chosen: &mut Vec<usize>,
        mut candidates: FixedBitSet,
        mut excluded: FixedBitSet,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        self.nodes += 1;
        if chosen.len() + candidates.count_ones(..) < self.min_size {
            return ControlFlow::Continue(());
        }
        if candidates.is_clear() {
            if excluded.is_clear() {
                let mut set = chosen.clone();
                set.sort_unstable();
                return visit(&set);
            }
            return ControlFlow::Continue(());
        }
        // Pivot: the vertex with the most candidates outside its closed neighbourhood.
        let pivot = candidates
            .ones()
            .chain(excluded.ones())
            .max_by_key(|&u| {
                let mut rest = candidates.clone();
                rest.difference_with(&self.adjacency[u]);
                rest.set(u, false);
                rest.count_ones(..)
            })
            .expect("candidates is non-empty");
        // Branch on candidates that are the pivot or adjacent to it.
        let mut branch = candidates.clone();
        let mut closed = self.adjacency[pivot].clone();
        closed.grow(candidates.len());
        closed.insert(pivot);
        branch.intersect_with(&closed);
        for v in branch.ones().collect::<Vec<_>>() {
            let mut next_candidates = candidates.clone();
            next_candidates.difference_with(&self.adjacency[v]);
            next_candidates.set(v, false);
            let mut next_excluded = excluded.clone();
            next_excluded.difference_with(&self.adjacency[v]);
            next_excluded.set(v, false);
            chosen.push(v);
            let flow = self.expand(chosen, next_candidates, next_excluded, visit);
            chosen.pop();
            flow?;
            candidates.set(v, false);
            excluded.insert(v);
        }
        ControlFlow::Continue(())
    }
}
