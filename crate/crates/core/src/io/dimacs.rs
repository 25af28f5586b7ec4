//! DIMACS CNF and a two-block QDIMACS subset.
//!
//! Besides plain comments, `c name <var> <name>` lines name variables; names
//! show up in the encoded tables. In QDIMACS input at most one `a` line and
//! then at most one `e` line may follow the problem line. Variables that
//! occur in no clause and in no block are treated as existential; variables
//! that occur in a clause but in no block are rejected.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::reductions::{CnfFormula, Qbf2Formula};

struct Parsed {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
    names: Vec<String>,
    universal: Option<Vec<usize>>,
    existential: Option<Vec<usize>>,
}

fn parse(text: &str, source_name: &str, quantified: bool) -> Result<Parsed> {
    let mut header: Option<(usize, usize)> = None;
    let mut names: Vec<Option<String>> = Vec::new();
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut universal = None;
    let mut existential: Option<Vec<usize>> = None;
    let mut last_line = 0;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let err = |msg: String| Error::parse(source_name, line, msg);
        let mut words = raw.split_whitespace();
        let Some(first) = words.next() else {
            continue;
        };
        match first {
            "c" => {
                if words.next() == Some("name") {
                    let (Some(v), Some(n), None) = (words.next(), words.next(), words.next()) else {
                        return Err(err("expected `c name <var> <name>`".into()));
                    };
                    let (n_vars, _) = header.ok_or_else(|| err("`c name` before the problem line".into()))?;
                    let v: usize = v
                        .parse()
                        .ok()
                        .filter(|&v| v >= 1 && v <= n_vars)
                        .ok_or_else(|| err(format!("bad variable `{v}`")))?;
                    names[v - 1] = Some(n.to_string());
                }
            }
            "p" => {
                if header.is_some() {
                    return Err(err("second problem line".into()));
                }
                let (Some("cnf"), Some(n), Some(m), None) =
                    (words.next(), words.next(), words.next(), words.next())
                else {
                    return Err(err("expected `p cnf <vars> <clauses>`".into()));
                };
                let n: usize = n.parse().map_err(|_| err(format!("bad variable count `{n}`")))?;
                let m: usize = m.parse().map_err(|_| err(format!("bad clause count `{m}`")))?;
                header = Some((n, m));
                names = vec![None; n];
            }
            "a" | "e" if quantified => {
                let (n_vars, _) = header.ok_or_else(|| err("quantifier before the problem line".into()))?;
                if !clauses.is_empty() || !current.is_empty() {
                    return Err(err("quantifier after the first clause".into()));
                }
                let block = block(words, n_vars).map_err(&err)?;
                match first {
                    "a" if universal.is_none() && existential.is_none() => universal = Some(block),
                    "e" if existential.is_none() => existential = Some(block),
                    _ => return Err(err("only one `a` block followed by one `e` block is supported".into())),
                }
            }
            _ => {
                let (n_vars, _) = header.ok_or_else(|| err("clause before the problem line".into()))?;
                for w in std::iter::once(first).chain(words) {
                    let lit: i32 = w.parse().map_err(|_| err(format!("bad literal `{w}`")))?;
                    if lit == 0 {
                        if current.is_empty() {
                            return Err(err("empty clause".into()));
                        }
                        clauses.push(std::mem::take(&mut current));
                    } else if lit.unsigned_abs() as usize > n_vars {
                        return Err(err(format!("literal {lit} exceeds {n_vars} variables")));
                    } else {
                        current.push(lit);
                    }
                }
            }
        }
    }
    let Some((num_vars, num_clauses)) = header else {
        return Err(Error::parse(source_name, last_line.max(1), "missing problem line"));
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != num_clauses {
        return Err(Error::parse(
            source_name,
            last_line.max(1),
            format!("problem line promises {num_clauses} clauses, found {}", clauses.len()),
        ));
    }
    let names = names
        .into_iter()
        .enumerate()
        .map(|(k, n)| n.unwrap_or_else(|| format!("p{}", k + 1)))
        .collect();
    Ok(Parsed {
        num_vars,
        clauses,
        names,
        universal,
        existential,
    })
}

fn block<'w>(words: impl Iterator<Item = &'w str>, n_vars: usize) -> std::result::Result<Vec<usize>, String> {
    let mut out = Vec::new();
    let mut closed = false;
    for w in words {
        if closed {
            return Err("text after the closing 0".into());
        }
        let v: usize = w.parse().map_err(|_| format!("bad variable `{w}`"))?;
        if v == 0 {
            closed = true;
        } else if v > n_vars {
            return Err(format!("variable {v} exceeds {n_vars} variables"));
        } else {
            out.push(v);
        }
    }
    if !closed {
        return Err("quantifier block must end with 0".into());
    }
    Ok(out)
}

fn formula(p: &Parsed, source_name: &str) -> Result<CnfFormula> {
    CnfFormula::with_names(p.num_vars, p.clauses.clone(), p.names.clone()).map_err(|e| match e {
        Error::Domain(msg) => Error::parse(source_name, 1, msg),
        other => other,
    })
}

pub fn parse_dimacs(text: &str, source_name: &str) -> Result<CnfFormula> {
    let parsed = parse(text, source_name, false)?;
    formula(&parsed, source_name)
}

pub fn parse_qdimacs(text: &str, source_name: &str) -> Result<Qbf2Formula> {
    let parsed = parse(text, source_name, true)?;
    let matrix = formula(&parsed, source_name)?;
    let universal = parsed.universal.clone().unwrap_or_default();
    let mut existential = parsed.existential.clone().unwrap_or_default();
    let declared: BTreeSet<usize> = universal.iter().chain(&existential).copied().collect();
    let used: BTreeSet<usize> = matrix
        .clauses()
        .iter()
        .flatten()
        .map(|l| l.unsigned_abs() as usize)
        .collect();
    if let Some(v) = used.difference(&declared).next() {
        return Err(Error::parse(
            source_name,
            1,
            format!("variable {v} occurs in a clause but is not quantified"),
        ));
    }
    existential.extend((1..=matrix.num_vars()).filter(|v| !declared.contains(v)));
    Qbf2Formula::new(universal, existential, matrix).map_err(|e| match e {
        Error::Domain(msg) => Error::parse(source_name, 1, msg),
        other => other,
    })
}

fn header_and_names(phi: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", phi.num_vars(), phi.clauses().len());
    for v in 1..=phi.num_vars() {
        if phi.name(v) != format!("p{v}") {
            out.push_str(&format!("c name {v} {}\n", phi.name(v)));
        }
    }
    out
}

fn clauses(phi: &CnfFormula) -> String {
    let mut out = String::new();
    for c in phi.clauses() {
        for l in c {
            out.push_str(&format!("{l} "));
        }
        out.push_str("0\n");
    }
    out
}

pub fn dimacs_string(phi: &CnfFormula) -> String {
    header_and_names(phi) + &clauses(phi)
}

pub fn qdimacs_string(phi: &Qbf2Formula) -> String {
    let mut out = header_and_names(phi.matrix());
    for (q, vars) in [("a", phi.universal()), ("e", phi.existential())] {
        out.push_str(q);
        for v in vars {
            out.push_str(&format!(" {v}"));
        }
        out.push_str(" 0\n");
    }
    out + &clauses(phi.matrix())
}
