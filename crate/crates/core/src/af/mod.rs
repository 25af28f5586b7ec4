//! Dung argumentation frameworks.
//!
//! A framework is a directed attack graph over named arguments. Arguments
//! produced by the translation are either tuple arguments or auxiliary
//! arguments standing for "tuple `s` violates inclusion dependency `i`".
//! Every attack may carry the labels of the dependencies that caused it; the
//! semantics ignore these labels.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

mod labelling;
mod solver;

pub use solver::{
    credulous, enumerate_extensions, exists_nonempty_extension, skeptical, Solver, SolverOptions,
};

/// Set of argument identifiers.
pub type ArgSet = BTreeSet<String>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArgumentKind {
    /// Stands for the tuple with this id.
    Tuple { tuple: String },
    /// Self-attacking argument attacking `tuple` unless some supporter of
    /// `tuple` for `dependency` is accepted.
    Aux { tuple: String, dependency: String },
    /// An argument with no database reading (frameworks read from APX).
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Argument {
    pub id: String,
    pub kind: ArgumentKind,
}

impl Argument {
    pub fn plain(id: impl Into<String>) -> Self {
        Argument {
            id: id.into(),
            kind: ArgumentKind::Plain,
        }
    }

    pub fn tuple(tuple: impl Into<String>) -> Self {
        let tuple = tuple.into();
        Argument {
            id: tuple.clone(),
            kind: ArgumentKind::Tuple { tuple },
        }
    }

    /// Auxiliary argument named `<tuple>#<dependency>`.
    pub fn aux(tuple: impl Into<String>, dependency: impl Into<String>) -> Self {
        let tuple = tuple.into();
        let dependency = dependency.into();
        Argument {
            id: format!("{tuple}#{dependency}"),
            kind: ArgumentKind::Aux { tuple, dependency },
        }
    }

    pub fn is_aux(&self) -> bool {
        matches!(self.kind, ArgumentKind::Aux { .. })
    }

    /// The tuple this argument speaks about, if any.
    pub fn tuple_id(&self) -> Option<&str> {
        match &self.kind {
            ArgumentKind::Tuple { tuple } | ArgumentKind::Aux { tuple, .. } => Some(tuple),
            ArgumentKind::Plain => None,
        }
    }
}

/// Collects arguments and attacks, then freezes them into an [`ArgFramework`].
#[derive(Debug, Clone, Default)]
pub struct FrameworkBuilder {
    arguments: BTreeMap<String, Argument>,
    attacks: BTreeMap<(String, String), BTreeSet<String>>,
}

impl FrameworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn argument(&mut self, argument: Argument) -> Result<&mut Self> {
        if self.arguments.contains_key(&argument.id) {
            return Err(Error::Domain(format!(
                "argument `{}` declared twice",
                argument.id
            )));
        }
        self.arguments.insert(argument.id.clone(), argument);
        Ok(self)
    }

    pub fn attack(&mut self, attacker: &str, target: &str) -> &mut Self {
        self.attacks
            .entry((attacker.to_string(), target.to_string()))
            .or_default();
        self
    }

    /// Adds an attack and records `label` as one of its causes. Repeated
    /// attacks collapse into one edge with merged labels.
    pub fn attack_because(&mut self, attacker: &str, target: &str, label: &str) -> &mut Self {
        self.attacks
            .entry((attacker.to_string(), target.to_string()))
            .or_default()
            .insert(label.to_string());
        self
    }

    pub fn build(self) -> Result<ArgFramework> {
        let arguments: Vec<Argument> = self.arguments.into_values().collect();
        let index: HashMap<String, usize> = arguments
            .iter()
            .enumerate()
            .map(|(k, a)| (a.id.clone(), k))
            .collect();
        let n = arguments.len();
        let mut attackers = vec![Vec::new(); n];
        let mut targets = vec![Vec::new(); n];
        let mut attacks = BTreeSet::new();
        let mut provenance = BTreeMap::new();
        for ((a, b), labels) in self.attacks {
            let lookup = |id: &str| {
                index.get(id).copied().ok_or_else(|| {
                    Error::Domain(format!("attack ({a}, {b}) mentions unknown argument `{id}`"))
                })
            };
            let (x, y) = (lookup(&a)?, lookup(&b)?);
            attacks.insert((x, y));
            attackers[y].push(x);
            targets[x].push(y);
            if !labels.is_empty() {
                provenance.insert((x, y), labels);
            }
        }
        for list in attackers.iter_mut().chain(targets.iter_mut()) {
            list.sort_unstable();
        }
        Ok(ArgFramework {
            arguments,
            index,
            attackers,
            targets,
            attacks,
            provenance,
        })
    }
}

/// An immutable argumentation framework `(A, R)`.
///
/// Arguments are stored sorted by id, so index order is id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgFramework {
    arguments: Vec<Argument>,
    index: HashMap<String, usize>,
    attackers: Vec<Vec<usize>>,
    targets: Vec<Vec<usize>>,
    attacks: BTreeSet<(usize, usize)>,
    provenance: BTreeMap<(usize, usize), BTreeSet<String>>,
}

impl ArgFramework {
    pub fn builder() -> FrameworkBuilder {
        FrameworkBuilder::new()
    }

    /// Framework of plain arguments.
    pub fn from_ids<'s>(
        arguments: impl IntoIterator<Item = &'s str>,
        attacks: impl IntoIterator<Item = (&'s str, &'s str)>,
    ) -> Result<Self> {
        let mut b = FrameworkBuilder::new();
        for a in arguments {
            b.argument(Argument::plain(a))?;
        }
        for (x, y) in attacks {
            b.attack(x, y);
        }
        b.build()
    }

    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    pub fn arguments(&self) -> &[Argument] {
        &self.arguments
    }

    pub fn argument(&self, id: &str) -> Option<&Argument> {
        self.index.get(id).map(|&k| &self.arguments[k])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn attack_count(&self) -> usize {
        self.attacks.len()
    }

    /// Attacks as `(attacker, target)` id pairs, sorted.
    pub fn attacks(&self) -> impl Iterator<Item = (&str, &str)> {
        self.attacks
            .iter()
            .map(|&(x, y)| (self.arguments[x].id.as_str(), self.arguments[y].id.as_str()))
    }

    pub fn has_attack(&self, attacker: &str, target: &str) -> bool {
        match (self.index.get(attacker), self.index.get(target)) {
            (Some(&x), Some(&y)) => self.attacks.contains(&(x, y)),
            _ => false,
        }
    }

    /// Dependency labels that caused the attack, if recorded.
    pub fn provenance(&self, attacker: &str, target: &str) -> Option<&BTreeSet<String>> {
        let x = *self.index.get(attacker)?;
        let y = *self.index.get(target)?;
        self.provenance.get(&(x, y))
    }

    pub fn provenance_entries(&self) -> impl Iterator<Item = ((&str, &str), &BTreeSet<String>)> {
        self.provenance.iter().map(|(&(x, y), labels)| {
            (
                (self.arguments[x].id.as_str(), self.arguments[y].id.as_str()),
                labels,
            )
        })
    }

    pub fn attackers_of(&self, id: &str) -> Result<Vec<&str>> {
        let k = self.require(id)?;
        Ok(self.attackers[k]
            .iter()
            .map(|&x| self.arguments[x].id.as_str())
            .collect())
    }

    pub fn targets_of(&self, id: &str) -> Result<Vec<&str>> {
        let k = self.require(id)?;
        Ok(self.targets[k]
            .iter()
            .map(|&x| self.arguments[x].id.as_str())
            .collect())
    }

    pub fn is_self_attacking(&self, id: &str) -> Result<bool> {
        let k = self.require(id)?;
        Ok(self.attacks.contains(&(k, k)))
    }

    /// Keeps the arguments accepted by `keep` and the attacks among them.
    pub fn restrict(&self, mut keep: impl FnMut(&Argument) -> bool) -> ArgFramework {
        let mut b = FrameworkBuilder::new();
        let kept: Vec<bool> = self.arguments.iter().map(&mut keep).collect();
        for (a, &k) in self.arguments.iter().zip(&kept) {
            if k {
                b.arguments.insert(a.id.clone(), a.clone());
            }
        }
        for &(x, y) in &self.attacks {
            if kept[x] && kept[y] {
                let key = (self.arguments[x].id.clone(), self.arguments[y].id.clone());
                let labels = self.provenance.get(&(x, y)).cloned().unwrap_or_default();
                b.attacks.insert(key, labels);
            }
        }
        b.build().expect("restriction of a valid framework is valid")
    }

    /// `(S × S) ∩ R = ∅`.
    pub fn is_conflict_free(&self, set: &ArgSet) -> Result<bool> {
        let members = self.indices(set)?;
        Ok(members
            .iter()
            .all(|&x| self.targets[x].iter().all(|y| !members.contains(y))))
    }

    /// Every attacker of `argument` is attacked by some member of `set`.
    pub fn defends(&self, set: &ArgSet, argument: &str) -> Result<bool> {
        let members = self.indices(set)?;
        let a = self.require(argument)?;
        Ok(self.attackers[a].iter().all(|&z| {
            self.attackers[z].iter().any(|w| members.contains(w))
        }))
    }

    pub fn is_admissible(&self, set: &ArgSet) -> Result<bool> {
        if !self.is_conflict_free(set)? {
            return Ok(false);
        }
        for a in set {
            if !self.defends(set, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Conflict-free and attacking every argument outside the set.
    pub fn is_stable(&self, set: &ArgSet) -> Result<bool> {
        if !self.is_conflict_free(set)? {
            return Ok(false);
        }
        let members = self.indices(set)?;
        Ok((0..self.len()).all(|y| {
            members.contains(&y) || self.attackers[y].iter().any(|x| members.contains(x))
        }))
    }

    pub(crate) fn require(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::Domain(format!("unknown argument `{id}`")))
    }

    pub(crate) fn indices(&self, set: &ArgSet) -> Result<BTreeSet<usize>> {
        set.iter().map(|id| self.require(id)).collect()
    }

    pub(crate) fn attackers_idx(&self, k: usize) -> &[usize] {
        &self.attackers[k]
    }

    pub(crate) fn targets_idx(&self, k: usize) -> &[usize] {
        &self.targets[k]
    }

    pub(crate) fn self_attacking_idx(&self, k: usize) -> bool {
        self.attacks.contains(&(k, k))
    }

    pub(crate) fn id_of(&self, k: usize) -> &str {
        &self.arguments[k].id
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Semantics {
    ConflictFree,
    Naive,
    Admissible,
    Preferred,
    Stable,
}

impl Semantics {
    pub const ALL: [Semantics; 5] = [
        Semantics::ConflictFree,
        Semantics::Naive,
        Semantics::Admissible,
        Semantics::Preferred,
        Semantics::Stable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Semantics::ConflictFree => "conflict-free",
            Semantics::Naive => "naive",
            Semantics::Admissible => "admissible",
            Semantics::Preferred => "preferred",
            Semantics::Stable => "stable",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "cf" | "conf" | "conflict-free" | "conflict_free" => Semantics::ConflictFree,
            "na" | "naive" => Semantics::Naive,
            "adm" | "admissible" => Semantics::Admissible,
            "pr" | "pref" | "preferred" => Semantics::Preferred,
            "st" | "stb" | "stab" | "stable" => Semantics::Stable,
            other => return Err(Error::Domain(format!("unknown semantics `{other}`"))),
        })
    }
}

/// A set of arguments returned by enumeration, members sorted by id.
///
/// Extensions order lexicographically over their sorted member lists.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Extension {
    members: Vec<String>,
}

impl Extension {
    pub fn new(members: impl IntoIterator<Item = impl Into<String>>) -> Self {
        let mut members: Vec<String> = members.into_iter().map(Into::into).collect();
        members.sort();
        members.dedup();
        Extension { members }
    }

    pub fn members(&self) -> &[String] {
        &self.members
    }

    pub fn contains(&self, id: &str) -> bool {
        self.members.binary_search_by(|m| m.as_str().cmp(id)).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn to_set(&self) -> ArgSet {
        self.members.iter().cloned().collect()
    }
}

impl fmt::Display for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.members.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ids: &[&str]) -> ArgSet {
        ids.iter().map(|s| s.to_string()).collect()
    }

    // Attack graph of the first employee table.
    fn fd_framework() -> ArgFramework {
        ArgFramework::from_ids(
            ["s", "t", "u", "v"],
            [
                ("s", "t"),
                ("t", "s"),
                ("u", "v"),
                ("v", "u"),
                ("t", "v"),
                ("v", "t"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn conflict_freeness() {
        let f = fd_framework();
        assert!(f.is_conflict_free(&set(&["s", "v"])).unwrap());
        assert!(!f.is_conflict_free(&set(&["t", "v"])).unwrap());
        let g = ArgFramework::from_ids(["a", "b"], [("a", "a")]).unwrap();
        assert!(!g.is_conflict_free(&set(&["a", "b"])).unwrap());
        assert!(matches!(
            f.is_conflict_free(&set(&["zz"])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn unattacked_argument_is_always_defended() {
        let f = ArgFramework::from_ids(["a", "b"], [("a", "b")]).unwrap();
        assert!(f.defends(&ArgSet::new(), "a").unwrap());
        assert!(f.defends(&set(&["b"]), "a").unwrap());
        assert!(!f.defends(&ArgSet::new(), "b").unwrap());
        assert!(f.is_admissible(&set(&["a"])).unwrap());
    }

    #[test]
    fn repeated_attacks_merge_provenance() {
        let mut b = ArgFramework::builder();
        b.argument(Argument::tuple("x")).unwrap();
        b.argument(Argument::tuple("y")).unwrap();
        b.attack_because("x", "y", "d1").attack_because("x", "y", "d2");
        let f = b.build().unwrap();
        assert_eq!(f.attack_count(), 1);
        assert_eq!(f.provenance("x", "y").unwrap(), &set(&["d1", "d2"]));
    }

    #[test]
    fn attack_on_unknown_argument_fails() {
        let mut b = ArgFramework::builder();
        b.argument(Argument::plain("x")).unwrap();
        b.attack("x", "nope");
        assert!(matches!(b.build(), Err(Error::Domain(_))));
    }

    #[test]
    fn semantics_names_round_trip() {
        for sem in Semantics::ALL {
            assert_eq!(sem.name().parse::<Semantics>().unwrap(), sem);
        }
        assert_eq!("pref".parse::<Semantics>().unwrap(), Semantics::Preferred);
        assert!("grounded".parse::<Semantics>().is_err());
    }

    #[test]
    fn aux_argument_naming() {
        let a = Argument::aux("s", "id1");
        assert_eq!(a.id, "s#id1");
        assert_eq!(a.tuple_id(), Some("s"));
        assert!(a.is_aux());
    }
}
