//! Backtracking search over argument labellings that visits admissible sets.
//!
//! Labels follow the usual scheme for preferred-extension enumeration:
//! an argument is `In`, `Out` (attacked by an `In` argument), `MustOut`
//! (attacks an `In` argument and still has to be attacked back), `Undec`
//! (decided not `In`), or `Blank` (undecided). Each search node picks a blank
//! argument and branches on labelling it `In` or `Undec`. A node with a
//! `MustOut` argument that no blank argument attacks is a dead end; a node
//! without blank arguments labels an admissible set `In`.

use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

use super::ArgFramework;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Label {
    Blank,
    In,
    Out,
    MustOut,
    Undec,
}

pub(crate) type Labelling = Vec<Label>;

/// What to do with the admissible sets reached at the leaves.
pub(crate) enum Goal {
    /// Report every admissible set.
    All(Vec<FixedBitSet>),
    /// Keep only subset-maximal ones, pruning branches that cannot beat them.
    Maximal(Vec<FixedBitSet>),
    /// Stop at the first admissible set, optionally requiring it to be non-empty.
    First {
        nonempty: bool,
        found: Option<FixedBitSet>,
    },
}

pub(crate) struct LabellingSearch<'a> {
    af: &'a ArgFramework,
    pub nodes: u64,
    pub goal: Goal,
}

impl<'a> LabellingSearch<'a> {
    pub fn new(af: &'a ArgFramework, goal: Goal) -> Self {
        LabellingSearch { af, nodes: 0, goal }
    }

    /// All arguments blank, except self-attackers which can never be `In`.
    pub fn initial(&self) -> Labelling {
        (0..self.af.len())
            .map(|k| {
                if self.af.self_attacking_idx(k) {
                    Label::Undec
                } else {
                    Label::Blank
                }
            })
            .collect()
    }

    /// Labels `x` `In` and propagates. Fails when `x` is not blank.
    pub fn force_in(&self, lab: &mut Labelling, x: usize) -> bool {
        if lab[x] != Label::Blank {
            return false;
        }
        lab[x] = Label::In;
        for &y in self.af.targets_idx(x) {
            lab[y] = Label::Out;
        }
        for &z in self.af.attackers_idx(x) {
            if lab[z] != Label::Out {
                lab[z] = Label::MustOut;
            }
        }
        true
    }

    pub fn run(&mut self, lab: Labelling) -> ControlFlow<()> {
        self.explore(lab)
    }

    fn explore(&mut self, mut lab: Labelling) -> ControlFlow<()> {
        loop {
            self.nodes += 1;
            if self.dead(&lab) || self.hopeless(&lab) {
                return ControlFlow::Continue(());
            }
            let Some(x) = self.pick(&lab) else {
                return self.leaf(&lab);
            };
            let mut child = lab.clone();
            self.force_in(&mut child, x);
            self.explore(child)?;
            lab[x] = Label::Undec;
        }
    }

    fn dead(&self, lab: &Labelling) -> bool {
        lab.iter().enumerate().any(|(z, &l)| {
            l == Label::MustOut
                && !self
                    .af
                    .attackers_idx(z)
                    .iter()
                    .any(|&w| lab[w] == Label::Blank)
        })
    }

    fn hopeless(&self, lab: &Labelling) -> bool {
        let Goal::Maximal(found) = &self.goal else {
            return false;
        };
        if found.is_empty() {
            return false;
        }
        let reachable = collect(lab, |l| matches!(l, Label::In | Label::Blank));
        found.iter().any(|e| reachable.is_subset(e))
    }

    // Prefer blank arguments that resolve a pending MustOut.
    fn pick(&self, lab: &Labelling) -> Option<usize> {
        let mut first = None;
        for (x, &l) in lab.iter().enumerate() {
            if l != Label::Blank {
                continue;
            }
            if self
                .af
                .targets_idx(x)
                .iter()
                .any(|&y| lab[y] == Label::MustOut)
            {
                return Some(x);
            }
            first.get_or_insert(x);
        }
        first
    }

    fn leaf(&mut self, lab: &Labelling) -> ControlFlow<()> {
        let set = collect(lab, |l| l == Label::In);
        match &mut self.goal {
            Goal::All(out) => {
                out.push(set);
                ControlFlow::Continue(())
            }
            Goal::Maximal(found) => {
                if !set.is_clear() && !found.iter().any(|e| set.is_subset(e)) {
                    found.retain(|e| !e.is_subset(&set));
                    found.push(set);
                }
                ControlFlow::Continue(())
            }
            Goal::First { nonempty, found } => {
                if *nonempty && set.is_clear() {
                    return ControlFlow::Continue(());
                }
                *found = Some(set);
                ControlFlow::Break(())
            }
        }
    }
}

fn collect(lab: &Labelling, keep: impl Fn(Label) -> bool) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(lab.len());
    for (k, &l) in lab.iter().enumerate() {
        if keep(l) {
            set.insert(k);
        }
    }
    set
}
