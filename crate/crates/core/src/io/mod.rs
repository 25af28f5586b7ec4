//! Text formats: CSV relations, dependency files, DIMACS/QDIMACS formulas,
//! and APX frameworks with a JSON sidecar.

mod apx;
mod dependencies;
mod dimacs;
mod table;

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::relational::{Database, Instance};

pub use apx::{apx_name, apx_string, export_apx, parse_apx, sidecar, write_sidecar, Sidecar};
pub use dependencies::{dependencies_string, parse_dependencies, parse_dependencies_file};
pub use dimacs::{dimacs_string, parse_dimacs, parse_qdimacs, qdimacs_string};
pub use table::{
    csv_string, parse_csv, parse_csv_relation, write_csv_relation, ParsedRelation, ID_COLUMN,
};

pub(crate) fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Relation name for a CSV path: its file stem.
pub fn relation_name(path: &Path) -> Result<String> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .ok_or_else(|| Error::Schema(format!("cannot name a relation after {}", path.display())))
}

/// Loads `(relation name, path)` pairs into one database.
pub fn load_database<'p>(sources: impl IntoIterator<Item = (String, &'p Path)>) -> Result<Database> {
    let mut db = Database::new();
    for (name, path) in sources {
        let parsed = parse_csv_relation(path, &name)?;
        parsed.insert_into(&mut db)?;
    }
    Ok(db)
}

/// Loads CSV files (relations named after their file stems) and a
/// dependency file into an instance.
pub fn load_instance<P: AsRef<Path>>(csv_paths: &[P], deps_path: &Path) -> Result<Instance> {
    let sources = csv_paths
        .iter()
        .map(|p| Ok((relation_name(p.as_ref())?, p.as_ref())))
        .collect::<Result<Vec<_>>>()?;
    let db = load_database(sources)?;
    let deps = parse_dependencies_file(deps_path)?;
    Instance::new(db, deps)
}
