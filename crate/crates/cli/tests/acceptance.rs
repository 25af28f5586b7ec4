//! Acceptance suite. Runs every criterion, prints one line each and exits
//! non-zero if any of them failed.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::Rng;
use repairaf::af::{ArgFramework, Extension, Semantics, Solver};
use repairaf::generate::{random_cnf, random_instance, random_qbf2, rng, InstanceClass, InstanceParams};
use repairaf::io::{load_instance, parse_dimacs, parse_qdimacs};
use repairaf::reasoning::{brute_force_repairs, Reasoner};
use repairaf::reductions::{
    assignments, encode_qbf_allrepair, encode_sat_rep, encode_sat_somerepair, eval_cnf, eval_qbf2,
    EncodedInstance,
};
use repairaf::relational::Instance;
use repairaf::translation::{build_af_combined, build_af_fd, build_af_id, build_af_raw, preprocess};
use serde_json::{json, Value};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const SAMPLES_PER_CLASS: usize = 1000;
const CNF_SAMPLES: usize = 500;
const QBF_SAMPLES: usize = 200;

fn fixture_dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn load(name: &str) -> Instance {
    let dir = fixture_dir(name);
    load_instance(&[dir.join("T.csv")], &dir.join("deps.txt")).expect("fixture loads")
}

fn cli(args: &[&str]) -> Result<Value, String> {
    let argv = std::iter::once("repairaf").chain(args.iter().copied());
    let (code, out, err) = repairaf_cli::main_with(argv, None);
    if code != 0 {
        return Err(format!("`{}` exited with {code}: {err}", args.join(" ")));
    }
    serde_json::from_str(&out).map_err(|e| e.to_string())
}

fn ext(sets: &[&[&str]]) -> Vec<Extension> {
    let mut v: Vec<Extension> = sets.iter().map(|s| Extension::new(s.iter().copied())).collect();
    v.sort();
    v
}

fn attack_set(af: &ArgFramework) -> BTreeSet<(String, String)> {
    af.attacks().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn rows(e: &EncodedInstance) -> Vec<String> {
    let rel = e.instance.database().relation("T").unwrap();
    rel.tuples()
        .iter()
        .map(|t| {
            let cells: Vec<&str> = rel.schema().iter().map(|a| t.value(a).unwrap()).collect();
            format!("{} {}", t.id(), cells.join(" "))
        })
        .collect()
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure!(took < limit, "took {took:?}, limit {limit:?}");
    Ok(took)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let dir = fixture_dir("example1").display().to_string();
    let out = cli(&["--dir", &dir, "repairs"])?;
    let expected = json!([["s", "u"], ["s", "v"], ["t", "u"]]);
    ensure!(out["repairs"] == expected, "repairs {}", out["repairs"]);

    let af = build_af_fd(&load("example1")).map_err(|e| e.to_string())?.framework;
    let mut solver = Solver::new(&af);
    let naive = solver.enumerate(Semantics::Naive);
    ensure!(naive == ext(&[&["s", "u"], &["s", "v"], &["t", "u"]]), "naive {naive:?}");
    ensure!(solver.enumerate(Semantics::Stable) == naive, "stable differs from naive");
    ensure!(solver.enumerate(Semantics::Preferred) == naive, "preferred differs from naive");
    Ok(format!("{:?}", within(start, Duration::from_secs(1))?))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let inst = load("example2");
    let raw = build_af_id(&inst).map_err(|e| e.to_string())?;
    ensure!(raw.framework.len() == 12, "{} arguments", raw.framework.len());

    let mut expected = BTreeSet::new();
    for s in ["s", "t", "u", "v"] {
        for i in ["id1", "id2"] {
            let aux = format!("{s}#{i}");
            expected.insert((aux.clone(), s.to_string()));
            expected.insert((aux.clone(), aux));
        }
    }
    for (a, b) in [
        ("t", "s#id1"),
        ("t", "s#id2"),
        ("u", "s#id2"),
        ("t", "t#id1"),
        ("s", "t#id2"),
        ("s", "u#id1"),
        ("v", "u#id1"),
        ("v", "u#id2"),
        ("t", "v#id1"),
    ] {
        expected.insert((a.to_string(), b.to_string()));
    }
    ensure!(attack_set(&raw.framework) == expected, "attack set differs");

    let mut solver = Solver::new(&raw.framework);
    let preferred = solver.enumerate(Semantics::Preferred);
    ensure!(preferred == ext(&[&["s", "t"]]), "raw preferred {preferred:?}");
    let stable = solver.enumerate(Semantics::Stable);
    ensure!(stable.is_empty(), "raw stable {stable:?}");

    let pre = preprocess(&raw);
    ensure!(pre.removed_tuples == ["v", "u"], "removed {:?}", pre.removed_tuples);
    ensure!(pre.preprocess_rounds == 2, "{} rounds", pre.preprocess_rounds);
    let mut solver = Solver::new(&pre.framework);
    for sem in [Semantics::Naive, Semantics::Stable, Semantics::Preferred] {
        let got = solver.enumerate(sem);
        ensure!(got == ext(&[&["s", "t"]]), "{} after preprocessing: {got:?}", sem.name());
    }
    Ok(format!("{:?}", within(start, Duration::from_secs(1))?))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let inst = load("example3");
    let af = build_af_combined(&inst).map_err(|e| e.to_string())?.framework;
    let mut solver = Solver::new(&af);
    let preferred = solver.enumerate(Semantics::Preferred);
    ensure!(preferred == ext(&[&["t"]]), "preferred {preferred:?}");
    let su = Extension::new(["s", "u"]);
    ensure!(solver.enumerate(Semantics::Naive).contains(&su), "{{s,u}} is not naive");
    ensure!(!preferred.contains(&su), "{{s,u}} is preferred");

    let dir = fixture_dir("example3").display().to_string();
    for (tuple, answer) in [("t", true), ("s", false), ("u", false)] {
        for query in ["brave", "cautious"] {
            let got = cli(&["--dir", &dir, query, tuple])?["answer"].clone();
            ensure!(got == answer, "{query} {tuple} = {got}");
        }
    }
    Ok(format!("{:?}", within(start, Duration::from_secs(1))?))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let text = std::fs::read_to_string(fixture_dir("example4/formula.cnf")).map_err(|e| e.to_string())?;
    let phi = parse_dimacs(&text, "formula.cnf").map_err(|e| e.to_string())?;
    let enc = encode_sat_somerepair(&phi).map_err(|e| e.to_string())?;
    let table = [
        "s_phi 0 0 c1 0 c2 0 c3 0",
        "s_x x 1 c1 c1 0 0 0 0",
        "ns_x x 0 0 0 c2 c2 c3 c3",
        "s_y y 1 c1 c1 0 0 c3 c3",
        "ns_y y 0 0 0 c2 c2 0 0",
    ];
    ensure!(rows(&enc) == table, "cells {:#?}", rows(&enc));

    let repairs = Reasoner::new(&enc.instance).map_err(|e| e.to_string())?.enumerate_repairs();
    let expected: BTreeSet<BTreeSet<&str>> = [
        &["s_phi", "ns_x", "s_y"][..],
        &["s_x", "s_y"],
        &["s_x", "ns_y"],
        &["ns_x", "ns_y"],
    ]
    .iter()
    .map(|r| r.iter().copied().collect())
    .collect();
    let got: BTreeSet<BTreeSet<&str>> = repairs
        .repairs
        .iter()
        .map(|r| r.iter().map(String::as_str).collect())
        .collect();
    ensure!(got == expected && repairs.len() == 4, "repairs {:?}", repairs.repairs);

    let rep = encode_sat_rep(&phi).map_err(|e| e.to_string())?;
    let repairs = Reasoner::new(&rep.instance).map_err(|e| e.to_string())?.enumerate_repairs();
    ensure!(
        repairs.repairs == [vec!["ns_x", "s_phi", "s_y"]],
        "rep encoding repairs {:?}",
        repairs.repairs
    );
    Ok(format!("{:?}", within(start, Duration::from_secs(1))?))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let text =
        std::fs::read_to_string(fixture_dir("example5/formula.qdimacs")).map_err(|e| e.to_string())?;
    let phi = parse_qdimacs(&text, "formula.qdimacs").map_err(|e| e.to_string())?;
    let enc = encode_qbf_allrepair(&phi).map_err(|e| e.to_string())?;
    let table = [
        "s_phi 0 0 c1 0 c2 0 c3 0 c4 c4",
        "s_y1 y1 1 c1 c1 0 0 0 0 0 0",
        "ns_y1 y1 0 0 0 0 0 0 0 0 0",
        "s_y2 y2 1 c1 c1 c2 c2 c3 c3 0 0",
        "ns_y2 y2 0 0 0 0 0 0 0 0 0",
        "s_z3 z3 1 c1 c1 0 0 c3 c3 c4 0",
        "ns_z3 z3 0 0 0 c2 c2 0 0 c4 0",
        "s_z4 z4 1 0 0 0 0 c3 c3 c4 0",
        "ns_z4 z4 0 0 0 c2 c2 0 0 c4 0",
    ];
    ensure!(rows(&enc) == table, "cells {:#?}", rows(&enc));
    let mut reasoner = Reasoner::new(&enc.instance).map_err(|e| e.to_string())?;
    ensure!(reasoner.all_repair("s_phi").map_err(|e| e.to_string())?, "all_repair(s_phi) is false");
    Ok(format!("{:?}", within(start, Duration::from_secs(5))?))
}

fn class_seed(class: InstanceClass) -> u64 {
    match class {
        InstanceClass::FdOnly => 0xAC1,
        InstanceClass::IdOnly => 0xAC2,
        InstanceClass::Mixed => 0xAC3,
        InstanceClass::Multirel => 0xAC4,
    }
}

fn generated(class: InstanceClass) -> impl Iterator<Item = Instance> {
    let mut r = rng(class_seed(class));
    (0..SAMPLES_PER_CLASS).map(move |_| random_instance(&mut r, class, &InstanceParams::default()))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for class in InstanceClass::ALL {
        for (k, inst) in generated(class).enumerate() {
            let got = Reasoner::new(&inst).map_err(|e| e.to_string())?.enumerate_repairs();
            let oracle = brute_force_repairs(&inst).map_err(|e| e.to_string())?;
            ensure!(got == oracle, "{class:?} sample {k}: {:?} vs {:?}", got.repairs, oracle.repairs);
            total += 1;
        }
    }
    let took = within(start, Duration::from_secs(300))?;
    Ok(format!("{total} instances, {took:?}"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut r = rng(0xAC7);
    for k in 0..CNF_SAMPLES {
        let phi = random_cnf(&mut r, 6, 6);
        let vars: Vec<usize> = (1..=phi.num_vars()).collect();
        let sat = assignments(&vars).any(|a| eval_cnf(&phi, &a).unwrap());
        let enc = encode_sat_somerepair(&phi).map_err(|e| e.to_string())?;
        let brave = Reasoner::new(&enc.instance)
            .and_then(|mut r| r.some_repair(&enc.distinguished_tuple))
            .map_err(|e| e.to_string())?;
        ensure!(brave == sat, "cnf {k}: some_repair {brave}, satisfiable {sat}");
        let rep = encode_sat_rep(&phi).map_err(|e| e.to_string())?;
        let exists = Reasoner::new(&rep.instance).map_err(|e| e.to_string())?.rep_exists();
        ensure!(exists == sat, "cnf {k}: rep_exists {exists}, satisfiable {sat}");
    }
    for k in 0..QBF_SAMPLES {
        let phi = random_qbf2(&mut r, 3, 3, 6);
        let truth = eval_qbf2(&phi).map_err(|e| e.to_string())?;
        let enc = encode_qbf_allrepair(&phi).map_err(|e| e.to_string())?;
        let cautious = Reasoner::new(&enc.instance)
            .and_then(|mut r| r.all_repair(&enc.distinguished_tuple))
            .map_err(|e| e.to_string())?;
        ensure!(cautious == truth, "qbf {k}: all_repair {cautious}, value {truth}");
    }
    let took = within(start, Duration::from_secs(300))?;
    Ok(format!("{CNF_SAMPLES} CNFs, {QBF_SAMPLES} QBFs, {took:?}"))
}

fn shape_violations(af: &ArgFramework) -> Vec<String> {
    let mut out = Vec::new();
    for (a, b) in af.attacks() {
        let (src, dst) = (af.argument(a).unwrap(), af.argument(b).unwrap());
        if !src.is_aux() && !dst.is_aux() {
            if a == b {
                out.push(format!("{a} attacks itself"));
            } else if !af.has_attack(b, a) {
                out.push(format!("{a} -> {b} not mirrored"));
            }
        }
    }
    for arg in af.arguments().iter().filter(|a| a.is_aux()) {
        if !af.has_attack(&arg.id, &arg.id) {
            out.push(format!("{} does not attack itself", arg.id));
        }
    }
    out
}

/// Drops one unsupported tuple at a time, chosen at random.
fn random_order_survivors<R: Rng>(af: &ArgFramework, rng: &mut R) -> BTreeSet<String> {
    let mut af = af.clone();
    loop {
        let removable: Vec<String> = af
            .arguments()
            .iter()
            .filter(|a| a.is_aux())
            .filter(|a| af.attackers_of(&a.id).unwrap().iter().all(|&x| x == a.id))
            .map(|a| a.tuple_id().unwrap().to_string())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let Some(victim) = removable.choose(rng).cloned() else {
            break;
        };
        af = af.restrict(|a| a.tuple_id() != Some(victim.as_str()));
    }
    af.arguments().iter().filter(|a| !a.is_aux()).map(|a| a.id.clone()).collect()
}

fn criterion_8() -> Outcome {
    let mut r = rng(0xAC8);
    let mut violations = Vec::new();
    let mut frameworks = 0;
    for class in InstanceClass::ALL {
        for (k, inst) in generated(class).enumerate() {
            let tag = format!("{class:?} sample {k}");
            let raw = build_af_raw(&inst).map_err(|e| e.to_string())?;
            let combined = build_af_combined(&inst).map_err(|e| e.to_string())?;
            frameworks += 2;
            for af in [&raw.framework, &combined.framework] {
                violations.extend(shape_violations(af).into_iter().map(|v| format!("{tag}: {v}")));
            }
            for af in [&raw.framework, &combined.framework] {
                for e in Solver::new(af).enumerate(Semantics::Preferred) {
                    for a in e.members().iter().filter(|a| af.argument(a).unwrap().is_aux()) {
                        violations.push(format!("{tag}: {a} in a preferred extension"));
                    }
                }
            }

            let once = preprocess(&raw);
            let twice = preprocess(&once);
            if twice.framework != once.framework || twice.removed_tuples != once.removed_tuples {
                violations.push(format!("{tag}: preprocess is not idempotent"));
            }
            let survivors: BTreeSet<String> = once.tuple_arg_map.keys().cloned().collect();
            if random_order_survivors(&raw.framework, &mut r) != survivors {
                violations.push(format!("{tag}: removal order changes the survivors"));
            }
        }
    }
    ensure!(violations.is_empty(), "{} violations, first: {}", violations.len(), violations[0]);
    Ok(format!("{frameworks} frameworks, 0 violations"))
}

fn main() -> ExitCode {
    let criteria: [(usize, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>())));
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL ({why})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
