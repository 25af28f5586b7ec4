//! Dependency files, one dependency per line:
//!
//! ```text
//! # comment
//! fd T: Emp_ID -> Dept
//! fd T: -> Building            @constant_building
//! id T[Sup_ID] <= T[Emp_ID]    @sup_is_emp
//! ```
//!
//! Labels default to `fd<line>` / `id<line>`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::relational::Dependency;

pub fn parse_dependencies_file(path: &Path) -> Result<Vec<Dependency>> {
    parse_dependencies(&super::read(path)?, &path.display().to_string())
}

pub fn parse_dependencies(text: &str, source_name: &str) -> Result<Vec<Dependency>> {
    let mut out: Vec<Dependency> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |msg: String| Error::parse(source_name, line, msg);
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (body, label) = match content.rsplit_once('@') {
            Some((body, label)) => {
                let label = label.trim();
                if label.is_empty() || label.contains(char::is_whitespace) {
                    return Err(err(format!("bad label `{label}`")));
                }
                (body.trim(), Some(label.to_string()))
            }
            None => (content, None),
        };
        let (keyword, rest) = body
            .split_once(char::is_whitespace)
            .ok_or_else(|| err(format!("cannot read `{content}`")))?;
        let dep = match keyword {
            "fd" => {
                let (rel, sides) = rest
                    .split_once(':')
                    .ok_or_else(|| err("expected `fd <relation>: lhs -> rhs`".into()))?;
                let (lhs, rhs) = sides
                    .split_once("->")
                    .ok_or_else(|| err("missing `->`".into()))?;
                let rel = name(rel).ok_or_else(|| err("missing relation name".into()))?;
                Dependency::fd(
                    label.unwrap_or_else(|| format!("fd{line}")),
                    rel,
                    list(lhs).map_err(&err)?,
                    list(rhs).map_err(&err)?,
                )
            }
            "id" => {
                let (src, tgt) = rest
                    .split_once("<=")
                    .ok_or_else(|| err("expected `id R[..] <= S[..]`".into()))?;
                let (src, lhs) = bracketed(src).map_err(&err)?;
                let (tgt, rhs) = bracketed(tgt).map_err(&err)?;
                Dependency::id(label.unwrap_or_else(|| format!("id{line}")), src, lhs, tgt, rhs)
                    .map_err(|e| err(e.to_string()))?
            }
            other => return Err(err(format!("unknown dependency kind `{other}`"))),
        };
        out.push(dep);
    }
    Ok(out)
}

fn name(s: &str) -> Option<String> {
    let s = s.trim();
    (!s.is_empty() && !s.contains(char::is_whitespace)).then(|| s.to_string())
}

fn list(s: &str) -> std::result::Result<Vec<String>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|a| name(a).ok_or_else(|| format!("bad attribute list `{s}`")))
        .collect()
}

fn bracketed(s: &str) -> std::result::Result<(String, Vec<String>), String> {
    let s = s.trim();
    let (rel, rest) = s
        .split_once('[')
        .ok_or_else(|| format!("expected `relation[attributes]`, found `{s}`"))?;
    let attrs = rest
        .strip_suffix(']')
        .ok_or_else(|| format!("missing `]` in `{s}`"))?;
    let rel = name(rel).ok_or_else(|| format!("missing relation name in `{s}`"))?;
    Ok((rel, list(attrs)?))
}

/// Renders dependencies in the file syntax, each with its label.
pub fn dependencies_string(deps: &[Dependency]) -> String {
    let mut out = String::new();
    for d in deps {
        let line = if d.is_fd() {
            format!(
                "fd {}: {} -> {} @{}",
                d.source_relation(),
                d.lhs().join(","),
                d.rhs().join(","),
                d.label()
            )
        } else {
            format!(
                "id {}[{}] <= {}[{}] @{}",
                d.source_relation(),
                d.lhs().join(","),
                d.target_relation(),
                d.rhs().join(","),
                d.label()
            )
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}
