//! Database encodings of propositional formulas.
//!
//! For a CNF `φ = C1 ∧ … ∧ Cm` over `p1 … pn` the single relation `T` has
//! attributes `t0, u0, …, tm, um`. Each variable gets a positive tuple
//! `s_<p>` (`u0 = 1`) and a negative tuple `ns_<p>` (`u0 = 0`), both with
//! `t0 = p`, so the FD `t0 → u0` keeps them apart. A tuple whose literal
//! occurs in `Ci` carries `ci` in both `ti` and `ui`; `s_phi` carries `ci` in
//! `ti` only, so the ID `ti ⊆ ui` makes it depend on some literal of `Ci`.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::relational::{Database, Dependency, Instance, DEFAULT_RELATION};

use super::{CnfFormula, Qbf2Formula};

pub const DISTINGUISHED_TUPLE: &str = "s_phi";

/// An encoded formula and the tuples standing for its parts.
#[derive(Debug, Clone)]
pub struct EncodedInstance {
    pub instance: Instance,
    pub distinguished_tuple: String,
    /// Variable name → (positive tuple id, negative tuple id).
    pub variable_tuple_map: BTreeMap<String, (String, String)>,
    names: Vec<String>,
}

impl EncodedInstance {
    /// Reads a truth assignment off a set of tuples that picks exactly one
    /// tuple per variable. `None` if some variable has zero or two picks.
    pub fn assignment_of(&self, tuples: &[String]) -> Option<BTreeMap<usize, bool>> {
        let mut out = BTreeMap::new();
        for (k, name) in self.names.iter().enumerate() {
            let (pos, neg) = &self.variable_tuple_map[name];
            let has_pos = tuples.contains(pos);
            let has_neg = tuples.contains(neg);
            if has_pos == has_neg {
                return None;
            }
            out.insert(k + 1, has_pos);
        }
        Some(out)
    }

    /// Tuples choosing each variable's polarity according to `assignment`.
    pub fn tuples_for(&self, assignment: &BTreeMap<usize, bool>) -> Vec<String> {
        let mut out: Vec<String> = assignment
            .iter()
            .map(|(&v, &value)| {
                let (pos, neg) = &self.variable_tuple_map[&self.names[v - 1]];
                if value { pos.clone() } else { neg.clone() }
            })
            .collect();
        out.sort();
        out
    }
}

#[derive(Clone, Copy)]
enum Row {
    Phi,
    Pos(usize),
    Neg(usize),
}

fn constant(i: usize) -> String {
    format!("c{i}")
}

fn encode(phi: &CnfFormula, last_block: Option<&dyn Fn(Row) -> [String; 2]>) -> Result<EncodedInstance> {
    let m = phi.clauses().len();
    let blocks = m + usize::from(last_block.is_some());
    let schema: Vec<String> = (0..=blocks)
        .flat_map(|i| [format!("t{i}"), format!("u{i}")])
        .collect();

    let cells = |row: Row| -> Vec<String> {
        let mut out = match row {
            Row::Phi => vec!["0".to_string(), "0".to_string()],
            Row::Pos(j) => vec![phi.name(j).to_string(), "1".to_string()],
            Row::Neg(j) => vec![phi.name(j).to_string(), "0".to_string()],
        };
        for (k, clause) in phi.clauses().iter().enumerate() {
            let c = constant(k + 1);
            let pair = match row {
                Row::Phi => [c, "0".to_string()],
                Row::Pos(j) if clause.contains(&(j as i32)) => [c.clone(), c],
                Row::Neg(j) if clause.contains(&-(j as i32)) => [c.clone(), c],
                _ => ["0".to_string(), "0".to_string()],
            };
            out.extend(pair);
        }
        if let Some(extra) = last_block {
            out.extend(extra(row));
        }
        out
    };

    let mut rows = vec![(DISTINGUISHED_TUPLE.to_string(), cells(Row::Phi))];
    let mut variable_tuple_map = BTreeMap::new();
    for j in 1..=phi.num_vars() {
        let name = phi.name(j);
        let (pos, neg) = (format!("s_{name}"), format!("ns_{name}"));
        rows.push((pos.clone(), cells(Row::Pos(j))));
        rows.push((neg.clone(), cells(Row::Neg(j))));
        variable_tuple_map.insert(name.to_string(), (pos, neg));
    }
    let db = Database::unirelational(DEFAULT_RELATION, &schema, rows)?;

    let mut deps = vec![Dependency::fd("d0", DEFAULT_RELATION, ["t0"], ["u0"])];
    for i in 1..=blocks {
        deps.push(Dependency::id(
            format!("i{i}"),
            DEFAULT_RELATION,
            [format!("t{i}")],
            DEFAULT_RELATION,
            [format!("u{i}")],
        )?);
    }
    Ok(EncodedInstance {
        instance: Instance::new(db, deps)?,
        distinguished_tuple: DISTINGUISHED_TUPLE.to_string(),
        variable_tuple_map,
        names: phi.names().to_vec(),
    })
}

/// `φ` is satisfiable iff `s_phi` belongs to some repair.
pub fn encode_sat_somerepair(phi: &CnfFormula) -> Result<EncodedInstance> {
    encode(phi, None)
}

/// Adds a block `t(m+1), u(m+1)` in which every tuple needs `s_phi`, so that
/// `φ` is satisfiable iff any repair exists.
pub fn encode_sat_rep(phi: &CnfFormula) -> Result<EncodedInstance> {
    let c = constant(phi.clauses().len() + 1);
    let extra = |row: Row| match row {
        Row::Phi => [c.clone(), c.clone()],
        _ => [c.clone(), "0".to_string()],
    };
    encode(phi, Some(&extra))
}

/// Adds a block `t(m+1), u(m+1)` in which the tuples of existential variables
/// need `s_phi`, so that `∀Y ∃Z φ` is true iff `s_phi` is in every repair.
pub fn encode_qbf_allrepair(phi: &Qbf2Formula) -> Result<EncodedInstance> {
    let c = constant(phi.matrix().clauses().len() + 1);
    let zero = || "0".to_string();
    let extra = |row: Row| match row {
        Row::Phi => [c.clone(), c.clone()],
        Row::Pos(j) | Row::Neg(j) if phi.is_universal(j) => [zero(), zero()],
        Row::Pos(_) | Row::Neg(_) => [c.clone(), zero()],
    };
    encode(phi.matrix(), Some(&extra))
}
