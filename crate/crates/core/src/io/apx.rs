//! APX export and import, plus the JSON sidecar that keeps what APX cannot
//! say: which argument is which tuple, what pre-processing removed, and
//! which dependencies caused each attack.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Serialize;

use crate::af::{ArgFramework, Argument, ArgumentKind};
use crate::error::{Error, Result};
use crate::translation::TranslationResult;

/// APX name of an argument: auxiliary arguments become `<tuple>_<label>`.
pub fn apx_name(arg: &Argument) -> String {
    match &arg.kind {
        ArgumentKind::Aux { tuple, dependency } => format!("{tuple}_{dependency}"),
        _ => arg.id.clone(),
    }
}

fn names(af: &ArgFramework) -> Result<BTreeMap<&str, String>> {
    let mut seen = BTreeSet::new();
    let mut out = BTreeMap::new();
    for a in af.arguments() {
        let name = apx_name(a);
        if name.is_empty() || name.contains(['(', ')', ',', '.', ' ']) {
            return Err(Error::Domain(format!("argument `{}` has no APX rendering", a.id)));
        }
        if !seen.insert(name.clone()) {
            return Err(Error::Domain(format!("two arguments render as `{name}` in APX")));
        }
        out.insert(a.id.as_str(), name);
    }
    Ok(out)
}

pub fn apx_string(af: &ArgFramework) -> Result<String> {
    let names = names(af)?;
    let mut args: Vec<&String> = names.values().collect();
    args.sort();
    let mut attacks: Vec<(&String, &String)> = af
        .attacks()
        .map(|(a, b)| (&names[a], &names[b]))
        .collect();
    attacks.sort();
    let mut out = String::new();
    for a in args {
        out.push_str(&format!("arg({a}).\n"));
    }
    for (a, b) in attacks {
        out.push_str(&format!("att({a},{b}).\n"));
    }
    Ok(out)
}

pub fn export_apx(result: &TranslationResult, path: &Path) -> Result<()> {
    super::write(path, &apx_string(&result.framework)?)
}

/// Reads `arg(x).` / `att(x,y).` lines into a framework of plain arguments.
pub fn parse_apx(text: &str, source_name: &str) -> Result<ArgFramework> {
    let mut b = ArgFramework::builder();
    let mut attacks = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let err = |msg: String| Error::parse(source_name, line, msg);
        let s = raw.trim();
        if s.is_empty() || s.starts_with('%') {
            continue;
        }
        let inner = |prefix: &str| {
            s.strip_prefix(prefix)
                .and_then(|r| r.strip_suffix(").").or_else(|| r.strip_suffix(')')))
                .map(str::trim)
        };
        if let Some(a) = inner("arg(") {
            if a.is_empty() || a.contains(',') {
                return Err(err(format!("bad argument `{s}`")));
            }
            b.argument(Argument::plain(a)).map_err(|e| err(e.to_string()))?;
        } else if let Some(pair) = inner("att(") {
            let Some((x, y)) = pair.split_once(',') else {
                return Err(err(format!("bad attack `{s}`")));
            };
            attacks.push((line, x.trim().to_string(), y.trim().to_string()));
        } else {
            return Err(err(format!("cannot read `{s}`")));
        }
    }
    for (_, x, y) in &attacks {
        b.attack(x, y);
    }
    b.build().map_err(|e| {
        let line = attacks.first().map_or(1, |(l, _, _)| *l);
        Error::parse(source_name, line, e.to_string())
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProvenanceEntry {
    pub attacker: String,
    pub target: String,
    pub dependencies: Vec<String>,
}

/// Metadata accompanying an APX file; argument names are the APX ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sidecar {
    pub arguments: BTreeMap<String, ArgumentKind>,
    pub tuple_arg_map: BTreeMap<String, String>,
    pub removed_tuples: Vec<String>,
    pub preprocess_rounds: usize,
    pub provenance: Vec<ProvenanceEntry>,
}

pub fn sidecar(result: &TranslationResult) -> Result<Sidecar> {
    let af = &result.framework;
    let names = names(af)?;
    let mut provenance: Vec<ProvenanceEntry> = af
        .provenance_entries()
        .map(|((a, b), labels)| ProvenanceEntry {
            attacker: names[a].clone(),
            target: names[b].clone(),
            dependencies: labels.iter().cloned().collect(),
        })
        .collect();
    provenance.sort_by(|x, y| (&x.attacker, &x.target).cmp(&(&y.attacker, &y.target)));
    Ok(Sidecar {
        arguments: af
            .arguments()
            .iter()
            .map(|a| (names[a.id.as_str()].clone(), a.kind.clone()))
            .collect(),
        tuple_arg_map: result
            .tuple_arg_map
            .iter()
            .map(|(t, a)| (t.clone(), names[a.as_str()].clone()))
            .collect(),
        removed_tuples: result.removed_tuples.clone(),
        preprocess_rounds: result.preprocess_rounds,
        provenance,
    })
}

pub fn write_sidecar(result: &TranslationResult, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&sidecar(result)?).expect("serialisable");
    text.push('\n');
    super::write(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::translation::{build_af_fd, build_af_id};

    #[test]
    fn conflict_graph_export() {
        let r = build_af_fd(&fixtures::example1()).unwrap();
        let text = apx_string(&r.framework).unwrap();
        assert_eq!(
            text,
            "arg(s).\narg(t).\narg(u).\narg(v).\n\
             att(s,t).\natt(t,s).\natt(t,v).\natt(u,v).\natt(v,t).\natt(v,u).\n"
        );
    }

    #[test]
    fn aux_arguments_are_renamed() {
        let r = build_af_id(&fixtures::example2()).unwrap();
        let text = apx_string(&r.framework).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("arg(")).count(), 12);
        assert!(text.contains("att(t,s_id1).\n"));
        assert!(text.contains("att(s_id1,s_id1).\n"));
        let back = parse_apx(&text, "x").unwrap();
        assert_eq!(back.len(), 12);
        assert_eq!(back.attack_count(), r.framework.attack_count());
    }

    #[test]
    fn edgeless_framework_has_only_arg_lines() {
        let af = ArgFramework::from_ids(["b", "a"], []).unwrap();
        assert_eq!(apx_string(&af).unwrap(), "arg(a).\narg(b).\n");
    }

    #[test]
    fn colliding_names_are_refused() {
        let mut b = ArgFramework::builder();
        b.argument(Argument::tuple("s_i")).unwrap();
        b.argument(Argument::tuple("s")).unwrap();
        b.argument(Argument::aux("s", "i")).unwrap();
        let af = b.build().unwrap();
        assert!(matches!(apx_string(&af), Err(Error::Domain(_))));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_apx("arg(a).\nfoo\n", "x"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_apx("arg(a).\natt(a,b).\n", "x").is_err());
    }

    #[test]
    fn sidecar_uses_apx_names() {
        let r = build_af_id(&fixtures::example2()).unwrap();
        let side = sidecar(&r).unwrap();
        assert_eq!(side.tuple_arg_map["s"], "s");
        assert!(side.arguments.contains_key("u_id2"));
        let e = side
            .provenance
            .iter()
            .find(|p| p.attacker == "v" && p.target == "u_id1")
            .unwrap();
        assert_eq!(e.dependencies, ["id1"]);
    }
}
