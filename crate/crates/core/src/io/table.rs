//! One relation per CSV file. The header row is the schema; an optional
//! leading column named `#id` carries tuple ids, otherwise ids are
//! synthesised as `<relation>:<row>` counting data rows from 1.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::relational::{Database, Relation};

pub const ID_COLUMN: &str = "#id";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedRelation {
    pub name: String,
    pub schema: Vec<String>,
    pub tuples: Vec<(String, Vec<String>)>,
}

impl ParsedRelation {
    pub fn insert_into(self, db: &mut Database) -> Result<()> {
        db.add_relation(self.name.as_str(), self.schema)?;
        for (id, values) in self.tuples {
            db.insert(&self.name, id, values)?;
        }
        Ok(())
    }
}

pub fn parse_csv_relation(path: &Path, relation: &str) -> Result<ParsedRelation> {
    parse_csv(&super::read(path)?, &path.display().to_string(), relation)
}

/// Parses CSV text; `source_name` only labels error messages.
pub fn parse_csv(text: &str, source_name: &str, relation: &str) -> Result<ParsedRelation> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let line_of = |r: &csv::StringRecord| r.position().map_or(0, |p| p.line() as usize);
    let csv_err = |e: csv::Error| {
        let line = e.position().map_or(0, |p| p.line() as usize);
        Error::parse(source_name, line, e.to_string())
    };

    let Some(header) = records.next() else {
        return Err(Error::parse(source_name, 1, "missing header row"));
    };
    let header = header.map_err(csv_err)?;
    let mut columns: Vec<String> = header.iter().map(|h| h.trim().to_string()).collect();
    let has_ids = columns.first().is_some_and(|c| c == ID_COLUMN);
    if has_ids {
        columns.remove(0);
    }
    let mut seen = BTreeSet::new();
    for c in &columns {
        if c.is_empty() {
            return Err(Error::parse(source_name, 1, "empty attribute name"));
        }
        if c == ID_COLUMN {
            return Err(Error::parse(source_name, 1, "`#id` must be the first column"));
        }
        if !seen.insert(c.as_str()) {
            return Err(Error::parse(source_name, 1, format!("duplicate attribute `{c}`")));
        }
    }

    let width = columns.len() + usize::from(has_ids);
    let mut tuples = Vec::new();
    let mut ids = BTreeSet::new();
    for (row, record) in records.enumerate() {
        let record = record.map_err(csv_err)?;
        let line = line_of(&record);
        if record.len() != width {
            return Err(Error::parse(
                source_name,
                line,
                format!("expected {width} fields, found {}", record.len()),
            ));
        }
        let mut fields = record.iter().map(str::to_string);
        let id = if has_ids {
            let id = fields.next().unwrap_or_default().trim().to_string();
            if id.is_empty() {
                return Err(Error::parse(source_name, line, "empty tuple id"));
            }
            id
        } else {
            format!("{relation}:{}", row + 1)
        };
        if !ids.insert(id.clone()) {
            return Err(Error::parse(source_name, line, format!("duplicate tuple id `{id}`")));
        }
        tuples.push((id, fields.collect()));
    }
    Ok(ParsedRelation {
        name: relation.to_string(),
        schema: columns,
        tuples,
    })
}

/// CSV text for a relation, always with an `#id` column.
pub fn csv_string(rel: &Relation) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once(ID_COLUMN).chain(rel.schema().iter().map(String::as_str));
    writer.write_record(header).expect("in-memory write");
    for t in rel.tuples() {
        let values = rel
            .schema()
            .iter()
            .map(|a| t.value(a).expect("tuple covers its schema"));
        writer
            .write_record(std::iter::once(t.id()).chain(values))
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("UTF-8 input")
}

pub fn write_csv_relation(rel: &Relation, path: &Path) -> Result<()> {
    super::write(path, &csv_string(rel))
}
