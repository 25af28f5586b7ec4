//! The three employee tables used throughout the test suites, built in code.
//! The same data is checked in as CSV under `fixtures/` at the workspace root.

use crate::relational::{Database, Dependency, Instance};

fn table(schema: &[&str], rows: &[(&str, &[&str])]) -> Database {
    Database::unirelational(
        "T",
        schema,
        rows.iter()
            .map(|(id, values)| (id.to_string(), values.to_vec())),
    )
    .expect("fixture table is well formed")
}

/// Four employees under `Emp_ID → Dept` and `Sup_ID → Building`.
pub fn example1() -> Instance {
    let db = table(
        &["Emp_ID", "Sup_ID", "Dept", "Building"],
        &[
            ("s", &["TimX3", "JonX1", "Marketing", "B1"]),
            ("t", &["TimX3", "AxeK4", "Sales", "B2"]),
            ("u", &["JonX1", "JonX1", "Production", "B1"]),
            ("v", &["JonX1", "AxeK4", "Distribution", "B4"]),
        ],
    );
    Instance::new(
        db,
        vec![
            Dependency::fd("emp_dept", "T", ["Emp_ID"], ["Dept"]),
            Dependency::fd("sup_building", "T", ["Sup_ID"], ["Building"]),
        ],
    )
    .expect("fixture instance is well formed")
}

/// Four employees under `Sup_ID ⊆ Emp_ID` (`id1`) and `Covers_For ⊆ Dept` (`id2`).
pub fn example2() -> Instance {
    let db = table(
        &["Emp_ID", "Sup_ID", "Dept", "Covers_For"],
        &[
            ("s", &["JonX1", "AxeK4", "Production", "Marketing"]),
            ("t", &["AxeK4", "AxeK4", "Marketing", "Production"]),
            ("u", &["TimX3", "JonX1", "Marketing", "Distribution"]),
            ("v", &["JonX1", "AxeK4", "Distribution", "R&D"]),
        ],
    );
    Instance::new(
        db,
        vec![
            Dependency::id("id1", "T", ["Sup_ID"], "T", ["Emp_ID"]).unwrap(),
            Dependency::id("id2", "T", ["Covers_For"], "T", ["Dept"]).unwrap(),
        ],
    )
    .expect("fixture instance is well formed")
}

/// Three employees under `Sup_ID → Building` and `Covers_For ⊆ Dept`.
pub fn example3() -> Instance {
    let db = table(
        &["Emp_ID", "Sup_ID", "Dept", "Building", "Covers_For"],
        &[
            ("s", &["JonX1", "AxeK4", "Production", "B4", "Sales"]),
            ("t", &["TimX3", "AxeK4", "Sales", "B2", "Sales"]),
            ("u", &["AxeK4", "AxeK4", "Marketing", "B4", "Production"]),
        ],
    );
    Instance::new(
        db,
        vec![
            Dependency::fd("sup_building", "T", ["Sup_ID"], ["Building"]),
            Dependency::id("covers_dept", "T", ["Covers_For"], "T", ["Dept"]).unwrap(),
        ],
    )
    .expect("fixture instance is well formed")
}
