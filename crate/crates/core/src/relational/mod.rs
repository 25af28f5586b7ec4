//! Relational databases, functional and inclusion dependencies, and the
//! subset-repair predicate.
//!
//! Everything here is the semantic ground truth the argumentation pipeline is
//! checked against: satisfaction is evaluated directly on tuple values, never
//! through a framework.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

mod compiled;
mod satisfaction;

pub use compiled::CompiledInstance;
pub use satisfaction::{is_consistent, is_repair, satisfies_fd, satisfies_id, support};

/// Set of tuple identifiers. All subset arithmetic in the crate is over ids.
pub type TupleSet = BTreeSet<String>;

/// Name used for the relation of a unirelational database unless stated otherwise.
pub const DEFAULT_RELATION: &str = "T";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AttributeRef {
    pub relation: String,
    pub attribute: String,
}

impl fmt::Display for AttributeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.relation, self.attribute)
    }
}

/// A row of a relation, identified by an explicit id.
///
/// Values are opaque strings compared by exact equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tuple {
    id: String,
    relation: String,
    values: BTreeMap<String, String>,
}

impl Tuple {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn relation(&self) -> &str {
        &self.relation
    }

    pub fn values(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn value(&self, attribute: &str) -> Option<&str> {
        self.values.get(attribute).map(String::as_str)
    }

    /// `s(x̄)`: the values of `attributes`, in order.
    pub fn project(&self, attributes: &[String]) -> Result<Vec<&str>> {
        attributes
            .iter()
            .map(|a| {
                self.value(a).ok_or_else(|| {
                    Error::Schema(format!(
                        "tuple `{}` of relation `{}` has no attribute `{a}`",
                        self.id, self.relation
                    ))
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    name: String,
    schema: Vec<String>,
    tuples: Vec<Tuple>,
}

impl Relation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    /// Tuples in insertion order.
    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn has_attribute(&self, attribute: &str) -> bool {
        self.schema.iter().any(|a| a == attribute)
    }
}

/// A collection of named relations. Tuple ids are unique across the whole database.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Database {
    relations: BTreeMap<String, Relation>,
    // tuple id -> relation name
    locations: BTreeMap<String, String>,
}

impl Database {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a relation with an ordered schema.
    pub fn add_relation<S: Into<String>>(
        &mut self,
        name: impl Into<String>,
        schema: impl IntoIterator<Item = S>,
    ) -> Result<()> {
        let name = name.into();
        if self.relations.contains_key(&name) {
            return Err(Error::Schema(format!("relation `{name}` declared twice")));
        }
        let schema: Vec<String> = schema.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for attribute in &schema {
            if !seen.insert(attribute) {
                return Err(Error::Schema(format!(
                    "attribute `{attribute}` appears twice in relation `{name}`"
                )));
            }
        }
        self.relations.insert(
            name.clone(),
            Relation {
                name,
                schema,
                tuples: Vec::new(),
            },
        );
        Ok(())
    }

    /// Appends a tuple whose values are given in schema order.
    pub fn insert<S: Into<String>>(
        &mut self,
        relation: &str,
        id: impl Into<String>,
        values: impl IntoIterator<Item = S>,
    ) -> Result<()> {
        let id = id.into();
        let rel = self
            .relations
            .get_mut(relation)
            .ok_or_else(|| Error::Schema(format!("unknown relation `{relation}`")))?;
        if self.locations.contains_key(&id) {
            return Err(Error::Domain(format!("duplicate tuple id `{id}`")));
        }
        let values: Vec<String> = values.into_iter().map(Into::into).collect();
        if values.len() != rel.schema.len() {
            return Err(Error::Schema(format!(
                "tuple `{id}` has {} values but relation `{relation}` has {} attributes",
                values.len(),
                rel.schema.len()
            )));
        }
        let values = rel.schema.iter().cloned().zip(values).collect();
        rel.tuples.push(Tuple {
            id: id.clone(),
            relation: relation.to_string(),
            values,
        });
        self.locations.insert(id, relation.to_string());
        Ok(())
    }

    /// Builds a single-relation database from rows of `(id, values)`.
    pub fn unirelational<S, V, R>(relation: &str, schema: &[S], rows: R) -> Result<Self>
    where
        S: AsRef<str>,
        V: Into<String>,
        R: IntoIterator<Item = (String, Vec<V>)>,
    {
        let mut db = Database::new();
        db.add_relation(relation, schema.iter().map(|s| s.as_ref().to_string()))?;
        for (id, values) in rows {
            db.insert(relation, id, values)?;
        }
        Ok(db)
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = &Relation> {
        self.relations.values()
    }

    pub fn is_unirelational(&self) -> bool {
        self.relations.len() <= 1
    }

    pub fn tuple(&self, id: &str) -> Option<&Tuple> {
        let relation = self.locations.get(id)?;
        self.relations[relation].tuples.iter().find(|t| t.id == id)
    }

    /// Looks up a tuple, failing with a domain error for unknown ids.
    pub fn get(&self, id: &str) -> Result<&Tuple> {
        self.tuple(id)
            .ok_or_else(|| Error::Domain(format!("unknown tuple id `{id}`")))
    }

    /// All tuples: relations in name order, tuples in insertion order.
    pub fn tuples(&self) -> impl Iterator<Item = &Tuple> {
        self.relations.values().flat_map(|r| r.tuples.iter())
    }

    pub fn tuple_ids(&self) -> TupleSet {
        self.locations.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    /// `dom(T)`: every value occurring in some tuple.
    pub fn active_domain(&self) -> BTreeSet<&str> {
        self.tuples()
            .flat_map(|t| t.values.values().map(String::as_str))
            .collect()
    }

    /// The sub-database made of the tuples in `keep` (schemas are kept).
    pub fn restrict(&self, keep: &TupleSet) -> Database {
        let relations = self
            .relations
            .iter()
            .map(|(name, rel)| {
                let tuples = rel
                    .tuples
                    .iter()
                    .filter(|t| keep.contains(&t.id))
                    .cloned()
                    .collect();
                (
                    name.clone(),
                    Relation {
                        name: name.clone(),
                        schema: rel.schema.clone(),
                        tuples,
                    },
                )
            })
            .collect();
        let locations = self
            .locations
            .iter()
            .filter(|(id, _)| keep.contains(*id))
            .map(|(id, rel)| (id.clone(), rel.clone()))
            .collect();
        Database {
            relations,
            locations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DependencyKind {
    Fd,
    Id,
}

/// A functional dependency `dep(x̄; ȳ)` or an inclusion dependency `x̄ ⊆ ȳ`.
///
/// For an FD both sides live in `source_relation`; for an ID the left side is
/// read in the source relation and the right side in the target relation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dependency {
    kind: DependencyKind,
    lhs: Vec<String>,
    rhs: Vec<String>,
    source_relation: String,
    target_relation: String,
    label: String,
}

impl Dependency {
    pub fn fd<S: Into<String>>(
        label: impl Into<String>,
        relation: impl Into<String>,
        lhs: impl IntoIterator<Item = S>,
        rhs: impl IntoIterator<Item = S>,
    ) -> Self {
        let relation = relation.into();
        Dependency {
            kind: DependencyKind::Fd,
            lhs: lhs.into_iter().map(Into::into).collect(),
            rhs: rhs.into_iter().map(Into::into).collect(),
            source_relation: relation.clone(),
            target_relation: relation,
            label: label.into(),
        }
    }

    pub fn id<S: Into<String>>(
        label: impl Into<String>,
        source_relation: impl Into<String>,
        lhs: impl IntoIterator<Item = S>,
        target_relation: impl Into<String>,
        rhs: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let dep = Dependency {
            kind: DependencyKind::Id,
            lhs: lhs.into_iter().map(Into::into).collect(),
            rhs: rhs.into_iter().map(Into::into).collect(),
            source_relation: source_relation.into(),
            target_relation: target_relation.into(),
            label: label.into(),
        };
        dep.check_arity()?;
        Ok(dep)
    }

    pub(crate) fn check_arity(&self) -> Result<()> {
        if self.kind == DependencyKind::Id && self.lhs.len() != self.rhs.len() {
            return Err(Error::Dependency(format!(
                "inclusion dependency `{}` relates {} attributes to {}",
                self.label,
                self.lhs.len(),
                self.rhs.len()
            )));
        }
        Ok(())
    }

    pub fn kind(&self) -> DependencyKind {
        self.kind
    }

    pub fn is_fd(&self) -> bool {
        self.kind == DependencyKind::Fd
    }

    pub fn is_id(&self) -> bool {
        self.kind == DependencyKind::Id
    }

    pub fn lhs(&self) -> &[String] {
        &self.lhs
    }

    pub fn rhs(&self) -> &[String] {
        &self.rhs
    }

    pub fn lhs_refs(&self) -> Vec<AttributeRef> {
        refs(&self.source_relation, &self.lhs)
    }

    pub fn rhs_refs(&self) -> Vec<AttributeRef> {
        refs(&self.target_relation, &self.rhs)
    }

    pub fn source_relation(&self) -> &str {
        &self.source_relation
    }

    pub fn target_relation(&self) -> &str {
        &self.target_relation
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn validate(&self, db: &Database) -> Result<()> {
        self.check_arity()?;
        let check = |relation: &str, attrs: &[String]| -> Result<()> {
            let rel = db.relation(relation).ok_or_else(|| {
                Error::Schema(format!(
                    "dependency `{}` references unknown relation `{relation}`",
                    self.label
                ))
            })?;
            for a in attrs {
                if !rel.has_attribute(a) {
                    return Err(Error::Schema(format!(
                        "dependency `{}` references unknown attribute `{relation}.{a}`",
                        self.label
                    )));
                }
            }
            Ok(())
        };
        check(&self.source_relation, &self.lhs)?;
        check(&self.target_relation, &self.rhs)
    }
}

fn refs(relation: &str, attrs: &[String]) -> Vec<AttributeRef> {
    attrs
        .iter()
        .map(|a| AttributeRef {
            relation: relation.to_string(),
            attribute: a.clone(),
        })
        .collect()
}

impl fmt::Display for Dependency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DependencyKind::Fd => write!(
                f,
                "dep({}; {})",
                self.lhs.join(","),
                self.rhs.join(",")
            ),
            DependencyKind::Id if self.source_relation == self.target_relation => {
                write!(f, "inc({}; {})", self.lhs.join(","), self.rhs.join(","))
            }
            DependencyKind::Id => write!(
                f,
                "{}[{}] ⊆ {}[{}]",
                self.source_relation,
                self.lhs.join(","),
                self.target_relation,
                self.rhs.join(",")
            ),
        }
    }
}

/// A database together with the dependencies it should satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    database: Database,
    dependencies: Vec<Dependency>,
}

impl Instance {
    /// Validates that every dependency refers to declared relations and
    /// attributes and that labels are unique.
    pub fn new(database: Database, dependencies: Vec<Dependency>) -> Result<Self> {
        let mut labels = BTreeSet::new();
        for dep in &dependencies {
            dep.validate(&database)?;
            if !labels.insert(dep.label()) {
                return Err(Error::Dependency(format!(
                    "dependency label `{}` used twice",
                    dep.label()
                )));
            }
        }
        Ok(Instance {
            database,
            dependencies,
        })
    }

    pub fn database(&self) -> &Database {
        &self.database
    }

    pub fn dependencies(&self) -> &[Dependency] {
        &self.dependencies
    }

    pub fn fds(&self) -> impl Iterator<Item = &Dependency> {
        self.dependencies.iter().filter(|d| d.is_fd())
    }

    pub fn ids(&self) -> impl Iterator<Item = &Dependency> {
        self.dependencies.iter().filter(|d| d.is_id())
    }

    pub fn has_fds(&self) -> bool {
        self.fds().next().is_some()
    }

    pub fn has_ids(&self) -> bool {
        self.ids().next().is_some()
    }

    pub fn dependency(&self, label: &str) -> Option<&Dependency> {
        self.dependencies.iter().find(|d| d.label() == label)
    }

    /// Same dependencies over the sub-database `keep`.
    pub fn restrict(&self, keep: &TupleSet) -> Instance {
        Instance {
            database: self.database.restrict(keep),
            dependencies: self.dependencies.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_attribute_is_rejected() {
        let mut db = Database::new();
        let err = db.add_relation("T", ["a", "a"]).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
    }

    #[test]
    fn duplicate_tuple_id_across_relations_is_rejected() {
        let mut db = Database::new();
        db.add_relation("R", ["a"]).unwrap();
        db.add_relation("S", ["b"]).unwrap();
        db.insert("R", "x", ["1"]).unwrap();
        assert!(matches!(
            db.insert("S", "x", ["1"]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let mut db = Database::new();
        db.add_relation("T", ["a", "b"]).unwrap();
        assert!(matches!(db.insert("T", "x", ["1"]), Err(Error::Schema(_))));
    }

    #[test]
    fn identical_rows_keep_distinct_ids() {
        let db = Database::unirelational(
            "T",
            &["a"],
            [("x".to_string(), vec!["1"]), ("y".to_string(), vec!["1"])],
        )
        .unwrap();
        assert_eq!(db.len(), 2);
        assert_eq!(db.active_domain().into_iter().collect::<Vec<_>>(), ["1"]);
    }

    #[test]
    fn instance_rejects_unknown_attribute() {
        let db = Database::unirelational("T", &["a"], Vec::<(String, Vec<String>)>::new()).unwrap();
        let err = Instance::new(db, vec![Dependency::fd("d", "T", ["a"], ["b"])]).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
    }

    #[test]
    fn id_length_mismatch_is_rejected() {
        let err = Dependency::id("i", "T", ["a", "b"], "T", ["c"]).unwrap_err();
        assert!(matches!(err, Error::Dependency(_)));
    }

    #[test]
    fn duplicate_labels_are_rejected() {
        let db = Database::unirelational("T", &["a"], Vec::<(String, Vec<String>)>::new()).unwrap();
        let deps = vec![
            Dependency::fd("d", "T", ["a"], ["a"]),
            Dependency::fd("d", "T", Vec::<String>::new(), vec!["a".to_string()]),
        ];
        assert!(matches!(
            Instance::new(db, deps),
            Err(Error::Dependency(_))
        ));
    }
}
