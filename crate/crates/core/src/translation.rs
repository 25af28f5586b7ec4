//! From database instances to argumentation frameworks.
//!
//! * FD layer: tuples `s`, `t` attack each other whenever `{s, t}` violates
//!   some functional dependency.
//! * ID layer: for every inclusion dependency `i` and tuple `s` of its
//!   source relation there is an auxiliary argument `s#i` that attacks
//!   itself and `s`; every supporter `t ∈ S_i(s)` attacks `s#i`, thereby
//!   defending `s`.
//!
//! Pre-processing repeatedly deletes tuples that can never be defended: those
//! with an auxiliary argument attacked by nothing but itself.

use std::collections::{BTreeMap, BTreeSet};

use crate::af::{ArgFramework, Argument, ArgumentKind, FrameworkBuilder};
use crate::error::{Error, Result};
use crate::relational::{satisfies_fd, support, Database, Dependency, Instance, TupleSet};

/// A framework together with the tuple bookkeeping needed to read repairs back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationResult {
    pub framework: ArgFramework,
    /// Tuples deleted by pre-processing, in removal order.
    pub removed_tuples: Vec<String>,
    /// Surviving tuple id → tuple argument id.
    pub tuple_arg_map: BTreeMap<String, String>,
    /// Number of fixpoint rounds that removed something.
    pub preprocess_rounds: usize,
    /// Attack edges inspected by pre-processing.
    pub preprocess_steps: u64,
}

impl TranslationResult {
    fn new(framework: ArgFramework) -> Self {
        let tuple_arg_map = framework
            .arguments()
            .iter()
            .filter_map(|a| match &a.kind {
                ArgumentKind::Tuple { tuple } => Some((tuple.clone(), a.id.clone())),
                _ => None,
            })
            .collect();
        TranslationResult {
            framework,
            removed_tuples: Vec::new(),
            tuple_arg_map,
            preprocess_rounds: 0,
            preprocess_steps: 0,
        }
    }

    /// Maps a set of argument ids back to tuple ids, dropping auxiliary arguments.
    pub fn tuples_of<'s>(&self, arguments: impl IntoIterator<Item = &'s String>) -> TupleSet {
        arguments
            .into_iter()
            .filter_map(|id| match &self.framework.argument(id)?.kind {
                ArgumentKind::Tuple { tuple } => Some(tuple.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn argument_of(&self, tuple: &str) -> Option<&str> {
        self.tuple_arg_map.get(tuple).map(String::as_str)
    }
}

fn add_tuple_arguments(b: &mut FrameworkBuilder, db: &Database, alive: &TupleSet) -> Result<()> {
    for t in db.tuples().filter(|t| alive.contains(t.id())) {
        b.argument(Argument::tuple(t.id()))?;
    }
    Ok(())
}

fn add_fd_layer<'d>(
    b: &mut FrameworkBuilder,
    db: &Database,
    fds: impl Iterator<Item = &'d Dependency>,
    alive: &TupleSet,
) -> Result<()> {
    for d in fds {
        let Some(rel) = db.relation(d.source_relation()) else {
            continue;
        };
        let tuples: Vec<_> = rel
            .tuples()
            .iter()
            .filter(|t| alive.contains(t.id()))
            .collect();
        for (k, s) in tuples.iter().enumerate() {
            for t in &tuples[k + 1..] {
                let pair: TupleSet = [s.id().to_string(), t.id().to_string()].into();
                if !satisfies_fd(db, &pair, d)? {
                    b.attack_because(s.id(), t.id(), d.label());
                    b.attack_because(t.id(), s.id(), d.label());
                }
            }
        }
    }
    Ok(())
}

fn add_id_layer<'d>(
    b: &mut FrameworkBuilder,
    db: &Database,
    ids: impl Iterator<Item = &'d Dependency>,
    alive: &TupleSet,
) -> Result<()> {
    for i in ids {
        let Some(rel) = db.relation(i.source_relation()) else {
            continue;
        };
        for s in rel.tuples().iter().filter(|t| alive.contains(t.id())) {
            let aux = Argument::aux(s.id(), i.label());
            let aux_id = aux.id.clone();
            b.argument(aux)?;
            b.attack_because(&aux_id, &aux_id, i.label());
            b.attack_because(&aux_id, s.id(), i.label());
            for t in support(db, s.id(), i)? {
                if alive.contains(&t) {
                    b.attack_because(&t, &aux_id, i.label());
                }
            }
        }
    }
    Ok(())
}

/// Conflict graph for an instance whose dependencies are all functional.
pub fn build_af_fd(inst: &Instance) -> Result<TranslationResult> {
    if let Some(i) = inst.ids().next() {
        return Err(Error::Precondition(format!(
            "build_af_fd accepts functional dependencies only, found `{}`",
            i.label()
        )));
    }
    let db = inst.database();
    let all = db.tuple_ids();
    let mut b = FrameworkBuilder::new();
    add_tuple_arguments(&mut b, db, &all)?;
    add_fd_layer(&mut b, db, inst.fds(), &all)?;
    Ok(TranslationResult::new(b.build()?))
}

/// Support framework for an instance whose dependencies are all inclusion
/// dependencies. No pre-processing is applied.
pub fn build_af_id(inst: &Instance) -> Result<TranslationResult> {
    if let Some(d) = inst.fds().next() {
        return Err(Error::Precondition(format!(
            "build_af_id accepts inclusion dependencies only, found `{}`",
            d.label()
        )));
    }
    let db = inst.database();
    let all = db.tuple_ids();
    let mut b = FrameworkBuilder::new();
    add_tuple_arguments(&mut b, db, &all)?;
    add_id_layer(&mut b, db, inst.ids(), &all)?;
    Ok(TranslationResult::new(b.build()?))
}

/// Framework-level pre-processing: while some auxiliary argument has no
/// attacker besides itself, delete its tuple together with all of the
/// tuple's auxiliary arguments. Each round removes every such tuple at once,
/// recorded in sorted id order.
pub fn preprocess(result: &TranslationResult) -> TranslationResult {
    let af = &result.framework;
    let mut removed_tuples = result.removed_tuples.clone();
    let mut rounds = result.preprocess_rounds;
    let mut steps = result.preprocess_steps;

    // Per auxiliary argument, the number of live attackers other than itself.
    let mut live_attackers: BTreeMap<&str, usize> = BTreeMap::new();
    let mut owner: BTreeMap<&str, &str> = BTreeMap::new();
    let mut frontier = BTreeSet::new();
    for a in af.arguments() {
        let ArgumentKind::Aux { tuple, .. } = &a.kind else {
            continue;
        };
        let attackers = af.attackers_of(&a.id).expect("argument exists");
        steps += attackers.len() as u64 + 1;
        let count = attackers.iter().filter(|&&x| x != a.id).count();
        if count == 0 {
            frontier.insert(tuple.as_str());
        }
        live_attackers.insert(&a.id, count);
        owner.insert(&a.id, tuple);
    }

    let mut dead: BTreeSet<&str> = BTreeSet::new();
    while !frontier.is_empty() {
        rounds += 1;
        dead.extend(frontier.iter().copied());
        let mut next = BTreeSet::new();
        for &t in &frontier {
            let Some(arg) = af.argument(t) else {
                continue;
            };
            for target in af.targets_of(&arg.id).expect("argument exists") {
                steps += 1;
                let Some(count) = live_attackers.get_mut(target) else {
                    continue;
                };
                *count -= 1;
                let o = owner[target];
                if *count == 0 && !dead.contains(o) {
                    next.insert(o);
                }
            }
        }
        removed_tuples.extend(frontier.iter().map(|t| t.to_string()));
        frontier = next;
    }

    let framework = af.restrict(|a| a.tuple_id().is_none_or(|t| !dead.contains(t)));
    let mut out = TranslationResult::new(framework);
    out.removed_tuples = removed_tuples;
    out.preprocess_rounds = rounds;
    out.preprocess_steps = steps;
    out
}

/// Database-level pre-processing: recursively deletes tuples that have no
/// supporter left for some inclusion dependency. Returns the survivors, the
/// removal order, and the number of rounds.
pub fn prune_unsupported(inst: &Instance) -> Result<(TupleSet, Vec<String>, usize)> {
    let db = inst.database();
    let mut requirements: Vec<(String, Vec<TupleSet>)> = Vec::new();
    for t in db.tuples() {
        let mut reqs = Vec::new();
        for i in inst.ids().filter(|i| i.source_relation() == t.relation()) {
            reqs.push(support(db, t.id(), i)?);
        }
        if !reqs.is_empty() {
            requirements.push((t.id().to_string(), reqs));
        }
    }
    let mut alive = db.tuple_ids();
    let mut removed = Vec::new();
    let mut rounds = 0;
    loop {
        let doomed: BTreeSet<String> = requirements
            .iter()
            .filter(|(id, reqs)| {
                alive.contains(id) && reqs.iter().any(|r| r.is_disjoint(&alive))
            })
            .map(|(id, _)| id.clone())
            .collect();
        if doomed.is_empty() {
            break;
        }
        rounds += 1;
        for id in &doomed {
            alive.remove(id);
        }
        removed.extend(doomed);
    }
    Ok((alive, removed, rounds))
}

/// Framework for functional and inclusion dependencies together: the
/// database is pre-processed first, then both attack layers are built over
/// the surviving tuples.
pub fn build_af_combined(inst: &Instance) -> Result<TranslationResult> {
    let (alive, removed, rounds) = prune_unsupported(inst)?;
    debug_assert_eq!(
        removed,
        {
            let id_only = Instance::new(
                inst.database().clone(),
                inst.ids().cloned().collect(),
            )
            .expect("sub-instance of a valid instance");
            preprocess(&build_af_id(&id_only).expect("ID layer builds")).removed_tuples
        },
        "database-level and framework-level pre-processing disagree"
    );
    let db = inst.database();
    let mut b = FrameworkBuilder::new();
    add_tuple_arguments(&mut b, db, &alive)?;
    add_fd_layer(&mut b, db, inst.fds(), &alive)?;
    add_id_layer(&mut b, db, inst.ids(), &alive)?;
    let mut out = TranslationResult::new(b.build()?);
    out.removed_tuples = removed;
    out.preprocess_rounds = rounds;
    Ok(out)
}

/// Multirelational variant. Auxiliary arguments exist only for tuples of an
/// ID's source relation, supporters come from its target relation, and FD
/// conflicts only arise inside the FD's relation.
pub fn build_af_multirel(inst: &Instance) -> Result<TranslationResult> {
    for d in inst.fds() {
        if d.source_relation() != d.target_relation() {
            return Err(Error::Precondition(format!(
                "functional dependency `{}` spans two relations",
                d.label()
            )));
        }
    }
    build_af_combined(inst)
}

/// Both layers over the full database, without pre-processing. Diagnostic
/// only: repairs are read off the pre-processed framework.
pub fn build_af_raw(inst: &Instance) -> Result<TranslationResult> {
    let db = inst.database();
    let all = db.tuple_ids();
    let mut b = FrameworkBuilder::new();
    add_tuple_arguments(&mut b, db, &all)?;
    add_fd_layer(&mut b, db, inst.fds(), &all)?;
    add_id_layer(&mut b, db, inst.ids(), &all)?;
    Ok(TranslationResult::new(b.build()?))
}
