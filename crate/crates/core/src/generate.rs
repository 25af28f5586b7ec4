//! Seeded random instances and formulas for property tests and benchmarks.
//!
//! All sampling goes through a caller-owned RNG; `rng(seed)` gives the
//! ChaCha8 stream used throughout, so a single seed reproduces a whole run.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::reductions::{CnfFormula, Qbf2Formula};
use crate::relational::{Database, Dependency, Instance, DEFAULT_RELATION};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceClass {
    FdOnly,
    IdOnly,
    Mixed,
    /// Two relations; FDs inside each, IDs in any direction.
    Multirel,
}

impl InstanceClass {
    pub const ALL: [InstanceClass; 4] = [
        InstanceClass::FdOnly,
        InstanceClass::IdOnly,
        InstanceClass::Mixed,
        InstanceClass::Multirel,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceParams {
    pub max_tuples: usize,
    pub max_attributes: usize,
    pub max_dependencies: usize,
    pub max_domain: usize,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            max_tuples: 8,
            max_attributes: 4,
            max_dependencies: 4,
            max_domain: 4,
        }
    }
}

fn pick_attrs<R: Rng>(rng: &mut R, schema: &[String], min: usize, max: usize) -> Vec<String> {
    let k = rng.random_range(min..=max.min(schema.len()));
    sample(rng, schema.len(), k)
        .into_iter()
        .map(|i| schema[i].clone())
        .collect()
}

fn random_fd<R: Rng>(rng: &mut R, label: String, rel: &str, schema: &[String]) -> Dependency {
    // an empty left-hand side now and then
    let lhs = if rng.random_bool(0.1) {
        Vec::new()
    } else {
        pick_attrs(rng, schema, 1, 2)
    };
    let rhs = pick_attrs(rng, schema, 1, 1);
    Dependency::fd(label, rel, lhs, rhs)
}

fn random_id<R: Rng>(
    rng: &mut R,
    label: String,
    (src, src_schema): (&str, &[String]),
    (tgt, tgt_schema): (&str, &[String]),
) -> Dependency {
    let width = if rng.random_bool(0.8) { 1 } else { 2 };
    let width = width.min(src_schema.len()).min(tgt_schema.len());
    let lhs = pick_attrs(rng, src_schema, width, width);
    let rhs = pick_attrs(rng, tgt_schema, width, width);
    Dependency::id(label, src, lhs, tgt, rhs).expect("equal widths")
}

fn fill<R: Rng>(rng: &mut R, db: &mut Database, rel: &str, width: usize, count: usize, start: usize, domain: usize) {
    for k in 0..count {
        let values: Vec<String> = (0..width)
            .map(|_| format!("v{}", rng.random_range(0..domain)))
            .collect();
        db.insert(rel, format!("t{}", start + k), values)
            .expect("generated row fits its relation");
    }
}

/// A random well-formed instance of the requested class.
pub fn random_instance<R: Rng>(rng: &mut R, class: InstanceClass, params: &InstanceParams) -> Instance {
    let width = rng.random_range(2..=params.max_attributes.max(2));
    let domain = rng.random_range(2..=params.max_domain.max(2));
    let tuples = rng.random_range(1..=params.max_tuples.max(1));
    let deps = rng.random_range(1..=params.max_dependencies.max(1));
    let mut db = Database::new();

    let dependencies = if class == InstanceClass::Multirel {
        let second = rng.random_range(1..=params.max_attributes.max(1));
        let schemas = [
            (0..width).map(|k| format!("a{k}")).collect::<Vec<_>>(),
            (0..second).map(|k| format!("b{k}")).collect::<Vec<_>>(),
        ];
        let names = ["R", "S"];
        for (name, schema) in names.iter().zip(&schemas) {
            db.add_relation(*name, schema.iter().cloned()).expect("fresh relation");
        }
        let in_first = rng.random_range(0..=tuples);
        fill(rng, &mut db, "R", width, in_first, 0, domain);
        fill(rng, &mut db, "S", second, tuples - in_first, in_first, domain);
        (0..deps)
            .map(|k| {
                let a = rng.random_range(0..2);
                if rng.random_bool(0.4) {
                    random_fd(rng, format!("d{k}"), names[a], &schemas[a])
                } else {
                    let b = rng.random_range(0..2);
                    random_id(
                        rng,
                        format!("d{k}"),
                        (names[a], &schemas[a]),
                        (names[b], &schemas[b]),
                    )
                }
            })
            .collect()
    } else {
        let schema: Vec<String> = (0..width).map(|k| format!("a{k}")).collect();
        db.add_relation(DEFAULT_RELATION, schema.iter().cloned())
            .expect("fresh relation");
        fill(rng, &mut db, DEFAULT_RELATION, width, tuples, 0, domain);
        let rel = (DEFAULT_RELATION, schema.as_slice());
        let deps = if class == InstanceClass::Mixed { deps.max(2) } else { deps };
        (0..deps)
            .map(|k| {
                let fd = match class {
                    InstanceClass::FdOnly => true,
                    InstanceClass::IdOnly => false,
                    // first one of each kind, the rest at random
                    _ => k == 0 || (k > 1 && rng.random_bool(0.5)),
                };
                if fd {
                    random_fd(rng, format!("d{k}"), DEFAULT_RELATION, &schema)
                } else {
                    random_id(rng, format!("d{k}"), rel, rel)
                }
            })
            .collect()
    };
    Instance::new(db, dependencies).expect("generated instance is well formed")
}

/// A CNF with 1..=`max_vars` variables and 0..=`max_clauses` clauses of 1–3 literals.
pub fn random_cnf<R: Rng>(rng: &mut R, max_vars: usize, max_clauses: usize) -> CnfFormula {
    let n = rng.random_range(1..=max_vars.max(1));
    let m = rng.random_range(0..=max_clauses);
    CnfFormula::new(n, random_clauses(rng, n, m)).expect("generated formula is well formed")
}

fn random_clauses<R: Rng>(rng: &mut R, n: usize, m: usize) -> Vec<Vec<i32>> {
    (0..m)
        .map(|_| {
            let len = rng.random_range(1..=3);
            (0..len)
                .map(|_| {
                    let v = rng.random_range(1..=n) as i32;
                    if rng.random_bool(0.5) { v } else { -v }
                })
                .collect()
        })
        .collect()
}

/// `∀Y ∃Z φ` with 1..=`max_universal` universal and 0..=`max_existential`
/// existential variables.
pub fn random_qbf2<R: Rng>(
    rng: &mut R,
    max_universal: usize,
    max_existential: usize,
    max_clauses: usize,
) -> Qbf2Formula {
    let ny = rng.random_range(1..=max_universal.max(1));
    let nz = rng.random_range(0..=max_existential);
    let n = ny + nz;
    let m = rng.random_range(1..=max_clauses.max(1));
    let names = (1..=n)
        .map(|j| if j <= ny { format!("y{j}") } else { format!("z{j}") })
        .collect();
    let matrix = CnfFormula::with_names(n, random_clauses(rng, n, m), names)
        .expect("generated formula is well formed");
    Qbf2Formula::new((1..=ny).collect(), (ny + 1..=n).collect(), matrix)
        .expect("blocks partition the variables")
}
