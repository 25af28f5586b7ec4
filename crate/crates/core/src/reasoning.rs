//! Repair enumeration and the decision problems on repairs, answered through
//! the argumentation pipeline, plus an exhaustive oracle to check them against.

use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::af::{Semantics, Solver, SolverOptions};
use crate::error::{Error, Result};
use crate::relational::{CompiledInstance, Instance};
use crate::translation::{build_af_combined, build_af_multirel, TranslationResult};

/// Largest database the brute-force oracle accepts by default.
pub const DEFAULT_ORACLE_CEILING: usize = 20;

/// Hard limit imposed by the 64-bit subset masks of the oracle.
const ORACLE_HARD_LIMIT: usize = 63;

/// Repairs as sorted tuple-id lists in canonical order, tagged with the
/// digest of the instance they belong to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairSet {
    pub repairs: Vec<Vec<String>>,
    pub instance_digest: String,
}

impl RepairSet {
    fn new(mut repairs: Vec<Vec<String>>, inst: &Instance) -> Self {
        for r in &mut repairs {
            r.sort();
        }
        repairs.sort();
        repairs.dedup();
        RepairSet {
            repairs,
            instance_digest: instance_digest(inst),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.repairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.repairs.len()
    }

    pub fn contains_repair(&self, tuples: &[&str]) -> bool {
        let mut key: Vec<String> = tuples.iter().map(|t| t.to_string()).collect();
        key.sort();
        self.repairs.contains(&key)
    }

    /// Whether the tuple occurs in at least one listed repair.
    pub fn in_some(&self, tuple: &str) -> bool {
        self.repairs.iter().any(|r| r.iter().any(|t| t == tuple))
    }

    /// Whether repairs exist and the tuple occurs in all of them.
    pub fn in_all(&self, tuple: &str) -> bool {
        !self.repairs.is_empty() && self.repairs.iter().all(|r| r.iter().any(|t| t == tuple))
    }
}

/// SHA-256 over a canonical JSON rendering: relations by name with sorted
/// attributes, tuples by id, dependencies by label.
pub fn instance_digest(inst: &Instance) -> String {
    let relations: Vec<_> = inst
        .database()
        .relations()
        .map(|r| {
            let mut attributes = r.schema().to_vec();
            attributes.sort();
            let mut tuples: Vec<_> = r
                .tuples()
                .iter()
                .map(|t| json!([t.id(), t.values()]))
                .collect();
            tuples.sort_by(|a, b| a[0].as_str().cmp(&b[0].as_str()));
            json!({"name": r.name(), "attributes": attributes, "tuples": tuples})
        })
        .collect();
    let mut dependencies: Vec<_> = inst
        .dependencies()
        .iter()
        .map(|d| {
            json!([
                d.label(),
                if d.is_fd() { "fd" } else { "id" },
                d.source_relation(),
                d.lhs(),
                d.target_relation(),
                d.rhs()
            ])
        })
        .collect();
    dependencies.sort_by(|a, b| a[0].as_str().cmp(&b[0].as_str()));
    let canonical = json!({"relations": relations, "dependencies": dependencies});
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

/// Which construction and read-off an instance is routed through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Functional dependencies only (or none): naive extensions of the conflict graph.
    FdOnly,
    /// Inclusion dependencies only: the surviving tuples after pre-processing.
    IdOnly,
    /// Both kinds: preferred extensions of the combined framework.
    Mixed,
}

impl Route {
    pub fn of(inst: &Instance) -> Route {
        match (inst.has_fds(), inst.has_ids()) {
            (_, false) => Route::FdOnly,
            (false, true) => Route::IdOnly,
            (true, true) => Route::Mixed,
        }
    }

    fn default_semantics(self) -> Semantics {
        match self {
            Route::FdOnly => Semantics::Naive,
            Route::IdOnly | Route::Mixed => Semantics::Preferred,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReasoningOptions {
    /// Replaces the routed semantics (and the ID-only read-off).
    pub semantics: Option<Semantics>,
    pub solver: SolverOptions,
}

/// Effort and size figures for one reasoning session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub route: Route,
    pub semantics: Semantics,
    pub tuples: usize,
    pub arguments: usize,
    pub attacks: usize,
    pub removed: usize,
    pub preprocess_rounds: usize,
    pub search_nodes: u64,
}

/// One instance, translated once, answering any number of queries.
pub struct Reasoner<'i> {
    inst: &'i Instance,
    options: ReasoningOptions,
    route: Route,
    translation: TranslationResult,
    nodes: u64,
}

impl<'i> Reasoner<'i> {
    pub fn new(inst: &'i Instance) -> Result<Self> {
        Self::with_options(inst, ReasoningOptions::default())
    }

    pub fn with_options(inst: &'i Instance, options: ReasoningOptions) -> Result<Self> {
        let translation = if inst.database().is_unirelational() {
            build_af_combined(inst)?
        } else {
            build_af_multirel(inst)?
        };
        Ok(Reasoner {
            inst,
            options,
            route: Route::of(inst),
            translation,
            nodes: 0,
        })
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn semantics(&self) -> Semantics {
        self.options
            .semantics
            .unwrap_or_else(|| self.route.default_semantics())
    }

    pub fn translation(&self) -> &TranslationResult {
        &self.translation
    }

    pub fn removed_tuples(&self) -> &[String] {
        &self.translation.removed_tuples
    }

    fn read_off(&self) -> bool {
        self.route == Route::IdOnly && self.options.semantics.is_none()
    }

    fn solver(&self) -> Solver<'_> {
        Solver::with_options(&self.translation.framework, self.options.solver)
    }

    fn survivors(&self) -> Vec<String> {
        self.translation.tuple_arg_map.keys().cloned().collect()
    }

    pub fn enumerate_repairs(&mut self) -> RepairSet {
        let repairs = if self.read_off() {
            let survivors = self.survivors();
            if survivors.is_empty() {
                Vec::new()
            } else {
                vec![survivors]
            }
        } else {
            let sem = self.semantics();
            let mut solver = self.solver();
            let extensions = solver.enumerate(sem);
            self.nodes += solver.search_nodes();
            extensions
                .iter()
                .map(|e| {
                    self.translation
                        .tuples_of(e.members())
                        .into_iter()
                        .collect::<Vec<_>>()
                })
                .filter(|r| !r.is_empty())
                .collect()
        };
        RepairSet::new(repairs, self.inst)
    }

    /// Whether a non-empty repair exists.
    pub fn rep_exists(&mut self) -> bool {
        if self.read_off() {
            return !self.translation.tuple_arg_map.is_empty();
        }
        let sem = self.semantics();
        let mut solver = self.solver();
        let answer = solver.exists_nonempty(sem);
        self.nodes += solver.search_nodes();
        answer
    }

    fn check_tuple(&self, tuple: &str) -> Result<Option<String>> {
        self.inst.database().get(tuple)?;
        Ok(self.translation.argument_of(tuple).map(str::to_string))
    }

    /// Brave reasoning: does the tuple belong to some repair?
    pub fn some_repair(&mut self, tuple: &str) -> Result<bool> {
        let Some(arg) = self.check_tuple(tuple)? else {
            return Ok(false);
        };
        if self.read_off() {
            return Ok(true);
        }
        let sem = self.semantics();
        let mut solver = self.solver();
        let answer = solver.credulous(&arg, sem)?;
        self.nodes += solver.search_nodes();
        Ok(answer)
    }

    /// Cautious reasoning: do repairs exist, and does the tuple belong to all
    /// of them? With `vacuous_skeptical` the absence of repairs counts as yes.
    pub fn all_repair(&mut self, tuple: &str) -> Result<bool> {
        let Some(arg) = self.check_tuple(tuple)? else {
            return Ok(self.options.solver.vacuous_skeptical && !self.rep_exists());
        };
        if self.read_off() {
            return Ok(true);
        }
        let sem = self.semantics();
        let mut solver = self.solver();
        let answer = solver.skeptical(&arg, sem)?;
        self.nodes += solver.search_nodes();
        Ok(answer)
    }

    /// Whether some repair has at least `k` tuples. Functional dependencies only.
    pub fn repair_at_least(&mut self, k: usize) -> Result<bool> {
        if self.inst.has_ids() {
            return Err(Error::Precondition(
                "size-bounded repair search accepts functional dependencies only".into(),
            ));
        }
        if k == 0 {
            return Err(Error::Precondition("size bound must be at least 1".into()));
        }
        let mut solver = self.solver();
        let answer = solver.exists_naive_of_size(k);
        self.nodes += solver.search_nodes();
        Ok(answer)
    }

    /// One repair, containing `tuple` when given. `None` when no such repair
    /// exists.
    pub fn witness(&mut self, tuple: Option<&str>) -> Result<Option<Vec<String>>> {
        let seed = match tuple {
            Some(t) => match self.check_tuple(t)? {
                Some(arg) => [arg].into(),
                None => return Ok(None),
            },
            None => Default::default(),
        };
        let mut solver = self.solver();
        let grown = solver.extend_to_preferred(&seed)?;
        self.nodes += solver.search_nodes();
        Ok(grown.map(|e| self.translation.tuples_of(e.members()).into_iter().collect()))
    }

    pub fn stats(&self) -> Stats {
        let framework = &self.translation.framework;
        Stats {
            route: self.route,
            semantics: self.semantics(),
            tuples: self.inst.database().len(),
            arguments: framework.len(),
            attacks: framework.attack_count(),
            removed: self.translation.removed_tuples.len(),
            preprocess_rounds: self.translation.preprocess_rounds,
            search_nodes: self.nodes,
        }
    }
}

pub fn enumerate_repairs(inst: &Instance) -> Result<RepairSet> {
    Ok(Reasoner::new(inst)?.enumerate_repairs())
}

pub fn rep_exists(inst: &Instance) -> Result<bool> {
    Ok(Reasoner::new(inst)?.rep_exists())
}

pub fn some_repair(inst: &Instance, tuple: &str) -> Result<bool> {
    Reasoner::new(inst)?.some_repair(tuple)
}

pub fn all_repair(inst: &Instance, tuple: &str) -> Result<bool> {
    Reasoner::new(inst)?.all_repair(tuple)
}

pub fn repair_at_least(inst: &Instance, k: usize) -> Result<bool> {
    Reasoner::new(inst)?.repair_at_least(k)
}

/// Repairs by exhaustive search over all subsets, with the default ceiling.
pub fn brute_force_repairs(inst: &Instance) -> Result<RepairSet> {
    brute_force_repairs_with_ceiling(inst, DEFAULT_ORACLE_CEILING)
}

/// Sweeps every subset, keeps the consistent ones, then drops each one that
/// has a consistent strict superset. Fails when the database is larger than
/// `ceiling` tuples.
pub fn brute_force_repairs_with_ceiling(inst: &Instance, ceiling: usize) -> Result<RepairSet> {
    let n = inst.database().len();
    if n > ceiling.min(ORACLE_HARD_LIMIT) {
        return Err(Error::Resource(format!(
            "oracle refuses {n} tuples (ceiling {})",
            ceiling.min(ORACLE_HARD_LIMIT)
        )));
    }
    let compiled = CompiledInstance::new(inst)?;
    let to_mask = |set: &fixedbitset::FixedBitSet| set.ones().fold(0u64, |m, k| m | 1 << k);
    let conflicts: Vec<u64> = compiled.conflicts().iter().map(to_mask).collect();
    let requirements: Vec<Vec<u64>> = (0..n)
        .map(|k| compiled.requirements(k).iter().map(to_mask).collect())
        .collect();
    let consistent = |m: u64| {
        (0..n).filter(|k| m >> k & 1 == 1).all(|k| {
            conflicts[k] & m == 0 && requirements[k].iter().all(|r| r & m != 0)
        })
    };

    let mut candidates: Vec<u64> = (1..1u64 << n).filter(|&m| consistent(m)).collect();
    candidates.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    let mut maximal: Vec<u64> = Vec::new();
    for m in candidates {
        if !maximal.iter().any(|&big| big & m == m) {
            maximal.push(m);
        }
    }
    let ids = compiled.ids();
    let repairs = maximal
        .into_iter()
        .map(|m| {
            (0..n)
                .filter(|k| m >> k & 1 == 1)
                .map(|k| ids[k].clone())
                .collect()
        })
        .collect();
    Ok(RepairSet::new(repairs, inst))
}
