//! Propositional formulas, their brute-force evaluation, and the encodings of
//! SAT and ∀∃-QBF into repair problems.

mod encode;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

pub use encode::{encode_qbf_allrepair, encode_sat_rep, encode_sat_somerepair, EncodedInstance};

/// Default limit on the number of variables `eval_qbf2` will sweep.
pub const DEFAULT_QBF_CEILING: usize = 16;

/// A CNF over variables `1..=num_vars`. Literals are signed variable indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
    names: Vec<String>,
}

impl CnfFormula {
    /// Validates the clauses, drops repeated literals inside each clause, and
    /// names the variables `p1`, `p2`, ….
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        let names = (1..=num_vars).map(|j| format!("p{j}")).collect();
        Self::with_names(num_vars, clauses, names)
    }

    pub fn with_names(num_vars: usize, clauses: Vec<Vec<i32>>, names: Vec<String>) -> Result<Self> {
        if names.len() != num_vars {
            return Err(Error::Domain(format!(
                "{} variable names given for {num_vars} variables",
                names.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            check_name(name)?;
            if !seen.insert(name) {
                return Err(Error::Domain(format!("variable name `{name}` is used twice")));
            }
        }
        let mut out = Vec::with_capacity(clauses.len());
        for (k, clause) in clauses.into_iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::Domain(format!("clause {} is empty", k + 1)));
            }
            let mut deduped: Vec<i32> = Vec::with_capacity(clause.len());
            for lit in clause {
                let var = lit.unsigned_abs() as usize;
                if lit == 0 || var > num_vars {
                    return Err(Error::Domain(format!(
                        "literal {lit} in clause {} is out of range 1..={num_vars}",
                        k + 1
                    )));
                }
                if !deduped.contains(&lit) {
                    deduped.push(lit);
                }
            }
            out.push(deduped);
        }
        Ok(CnfFormula {
            num_vars,
            clauses: out,
            names,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Name of variable `var` (1-based).
    pub fn name(&self, var: usize) -> &str {
        &self.names[var - 1]
    }

    /// Variable index for a name.
    pub fn var_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name).map(|k| k + 1)
    }
}

// Names end up as cell values next to the constants "0", "1", "c<k>" and
// inside tuple ids, so they are kept to a plain identifier alphabet.
fn check_name(name: &str) -> Result<()> {
    let plain = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
    let constant = name == "0"
        || name == "1"
        || name
            .strip_prefix('c')
            .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()));
    if !plain || constant {
        return Err(Error::Domain(format!("`{name}` is not a usable variable name")));
    }
    Ok(())
}

/// `∀Y ∃Z φ` with `Y` and `Z` partitioning the variables of `φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qbf2Formula {
    universal: Vec<usize>,
    existential: Vec<usize>,
    matrix: CnfFormula,
}

impl Qbf2Formula {
    pub fn new(universal: Vec<usize>, existential: Vec<usize>, matrix: CnfFormula) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &v in universal.iter().chain(&existential) {
            if v == 0 || v > matrix.num_vars() {
                return Err(Error::Domain(format!("quantified variable {v} is out of range")));
            }
            if !seen.insert(v) {
                return Err(Error::Domain(format!("variable {v} is quantified twice")));
            }
        }
        if seen.len() != matrix.num_vars() {
            return Err(Error::Domain(
                "every variable must be either universal or existential".into(),
            ));
        }
        Ok(Qbf2Formula {
            universal,
            existential,
            matrix,
        })
    }

    pub fn universal(&self) -> &[usize] {
        &self.universal
    }

    pub fn existential(&self) -> &[usize] {
        &self.existential
    }

    pub fn matrix(&self) -> &CnfFormula {
        &self.matrix
    }

    pub fn is_universal(&self, var: usize) -> bool {
        self.universal.contains(&var)
    }
}

/// Truth value of `phi` under a total assignment (1-based variables).
pub fn eval_cnf(phi: &CnfFormula, assignment: &BTreeMap<usize, bool>) -> Result<bool> {
    for v in 1..=phi.num_vars() {
        if !assignment.contains_key(&v) {
            return Err(Error::Domain(format!(
                "assignment leaves `{}` unset",
                phi.name(v)
            )));
        }
    }
    Ok(phi.clauses().iter().all(|clause| {
        clause
            .iter()
            .any(|&lit| assignment[&(lit.unsigned_abs() as usize)] == (lit > 0))
    }))
}

/// All assignments to `vars`, in binary counting order.
pub fn assignments(vars: &[usize]) -> impl Iterator<Item = BTreeMap<usize, bool>> + '_ {
    (0..1u64 << vars.len()).map(move |bits| {
        vars.iter()
            .enumerate()
            .map(|(k, &v)| (v, bits >> k & 1 == 1))
            .collect()
    })
}

/// Satisfiability by sweeping all assignments.
pub fn is_satisfiable(phi: &CnfFormula) -> bool {
    let vars: Vec<usize> = (1..=phi.num_vars()).collect();
    let satisfiable = assignments(&vars).any(|a| eval_cnf(phi, &a).expect("assignment is total"));
    satisfiable
}

pub fn eval_qbf2(phi: &Qbf2Formula) -> Result<bool> {
    eval_qbf2_with_ceiling(phi, DEFAULT_QBF_CEILING)
}

/// Truth of `∀Y ∃Z φ` by sweeping all assignments; refuses more than
/// `ceiling` variables.
pub fn eval_qbf2_with_ceiling(phi: &Qbf2Formula, ceiling: usize) -> Result<bool> {
    let n = phi.matrix().num_vars();
    if n > ceiling.min(63) {
        return Err(Error::Resource(format!(
            "QBF sweep refuses {n} variables (ceiling {ceiling})"
        )));
    }
    Ok(assignments(phi.universal()).all(|y| {
        assignments(phi.existential()).any(|z| {
            let mut total = y.clone();
            total.extend(z);
            eval_cnf(phi.matrix(), &total).expect("assignment is total")
        })
    }))
}
