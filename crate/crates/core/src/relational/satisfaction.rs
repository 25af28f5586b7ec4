use std::collections::{HashMap, HashSet};

use super::{CompiledInstance, Database, Dependency, Instance, Tuple, TupleSet};
use crate::error::{Error, Result};

fn members<'a>(db: &'a Database, subset: &TupleSet) -> Result<Vec<&'a Tuple>> {
    subset.iter().map(|id| db.get(id)).collect()
}

/// `P ⊨ dep(x̄; ȳ)`: tuples of `subset` that agree on the left side agree on
/// the right side. An empty left side forces the right side to be constant.
///
/// Tuples of relations other than the FD's relation are ignored.
pub fn satisfies_fd(db: &Database, subset: &TupleSet, d: &Dependency) -> Result<bool> {
    if !d.is_fd() {
        return Err(Error::Precondition(format!(
            "`{}` is not a functional dependency",
            d.label()
        )));
    }
    let mut seen: HashMap<Vec<&str>, Vec<&str>> = HashMap::new();
    for t in members(db, subset)? {
        if t.relation() != d.source_relation() {
            continue;
        }
        let key = t.project(d.lhs())?;
        let val = t.project(d.rhs())?;
        match seen.get(&key) {
            Some(prev) if *prev != val => return Ok(false),
            Some(_) => {}
            None => {
                seen.insert(key, val);
            }
        }
    }
    Ok(true)
}

/// `P ⊨ x̄ ⊆ ȳ`, evaluated inside `subset`: every source tuple of the subset
/// finds a target tuple of the subset whose right-side values equal its
/// left-side values.
pub fn satisfies_id(db: &Database, subset: &TupleSet, i: &Dependency) -> Result<bool> {
    if !i.is_id() {
        return Err(Error::Precondition(format!(
            "`{}` is not an inclusion dependency",
            i.label()
        )));
    }
    i.check_arity()?;
    let tuples = members(db, subset)?;
    let available: HashSet<Vec<&str>> = tuples
        .iter()
        .filter(|t| t.relation() == i.target_relation())
        .map(|t| t.project(i.rhs()))
        .collect::<Result<_>>()?;
    for s in tuples.iter().filter(|t| t.relation() == i.source_relation()) {
        if !available.contains(&s.project(i.lhs())?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `S_i(s)`: tuples of the target relation of `i` whose right-side values
/// equal the left-side values of `s`. May contain `s` itself.
pub fn support(db: &Database, s: &str, i: &Dependency) -> Result<TupleSet> {
    if !i.is_id() {
        return Err(Error::Precondition(format!(
            "`{}` is not an inclusion dependency",
            i.label()
        )));
    }
    i.check_arity()?;
    let s = db.get(s)?;
    if s.relation() != i.source_relation() {
        return Err(Error::Domain(format!(
            "tuple `{}` belongs to `{}`, not to the source relation `{}` of `{}`",
            s.id(),
            s.relation(),
            i.source_relation(),
            i.label()
        )));
    }
    let wanted = s.project(i.lhs())?;
    let mut out = TupleSet::new();
    if let Some(target) = db.relation(i.target_relation()) {
        for t in target.tuples() {
            if t.project(i.rhs())? == wanted {
                out.insert(t.id().to_string());
            }
        }
    }
    Ok(out)
}

/// `P ⊨ B`: every dependency of the instance holds on `subset`.
pub fn is_consistent(subset: &TupleSet, inst: &Instance) -> Result<bool> {
    let db = inst.database();
    for id in subset {
        db.get(id)?;
    }
    for dep in inst.dependencies() {
        let ok = if dep.is_fd() {
            satisfies_fd(db, subset, dep)?
        } else {
            satisfies_id(db, subset, dep)?
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `subset` is a subset-repair: non-empty, consistent, and no strict
/// superset inside the database is consistent.
pub fn is_repair(subset: &TupleSet, inst: &Instance) -> Result<bool> {
    if subset.is_empty() || !is_consistent(subset, inst)? {
        return Ok(false);
    }
    let compiled = CompiledInstance::new(inst)?;
    let mask = compiled.mask_of(subset)?;
    Ok(!compiled.has_consistent_strict_superset(&mask))
}
