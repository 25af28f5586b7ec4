//! Pipeline answers against the exhaustive repair oracle on random instances.

use repairaf::af::{Semantics, Solver};
use repairaf::generate::{random_instance, rng, InstanceClass, InstanceParams};
use repairaf::reasoning::{brute_force_repairs, Reasoner, RepairSet};
use repairaf::relational::{is_repair, Instance, TupleSet};
use repairaf::translation::build_af_fd;

const SAMPLES: usize = 1000;

fn check_queries(inst: &Instance, oracle: &RepairSet) {
    let mut reasoner = Reasoner::new(inst).unwrap();
    assert_eq!(reasoner.rep_exists(), !oracle.is_empty());
    for id in inst.database().tuple_ids() {
        assert_eq!(reasoner.some_repair(&id).unwrap(), oracle.in_some(&id), "brave {id}");
        assert_eq!(reasoner.all_repair(&id).unwrap(), oracle.in_all(&id), "cautious {id}");
        if reasoner.all_repair(&id).unwrap() && reasoner.rep_exists() {
            assert!(reasoner.some_repair(&id).unwrap());
        }
        match reasoner.witness(Some(&id)).unwrap() {
            Some(w) => assert!(oracle.repairs.contains(&w) && w.contains(&id)),
            None => assert!(!oracle.in_some(&id)),
        }
    }
    match reasoner.witness(None).unwrap() {
        Some(w) => assert!(oracle.repairs.contains(&w)),
        None => assert!(oracle.is_empty()),
    }
}

fn run_class(class: InstanceClass, seed: u64) {
    let params = InstanceParams::default();
    let mut r = rng(seed);
    for sample in 0..SAMPLES {
        let inst = random_instance(&mut r, class, &params);
        let oracle = brute_force_repairs(&inst).unwrap();
        let mut reasoner = Reasoner::new(&inst).unwrap();
        let got = reasoner.enumerate_repairs();
        assert_eq!(got, oracle, "{class:?} sample {sample}: {inst:#?}");
        for rep in &got.repairs {
            let subset: TupleSet = rep.iter().cloned().collect();
            assert!(is_repair(&subset, &inst).unwrap());
        }
        check_queries(&inst, &oracle);
    }
}

#[test]
fn fd_only_instances_match_the_oracle() {
    run_class(InstanceClass::FdOnly, 0xFD);
}

#[test]
fn id_only_instances_match_the_oracle() {
    run_class(InstanceClass::IdOnly, 0x1D);
}

#[test]
fn mixed_instances_match_the_oracle() {
    run_class(InstanceClass::Mixed, 0xB0);
}

#[test]
fn multirelational_instances_match_the_oracle() {
    run_class(InstanceClass::Multirel, 0x2E1);
}

#[test]
fn fd_only_naive_stable_and_preferred_coincide() {
    let mut r = rng(11);
    for _ in 0..300 {
        let inst = random_instance(&mut r, InstanceClass::FdOnly, &InstanceParams::default());
        let af = build_af_fd(&inst).unwrap().framework;
        let mut solver = Solver::new(&af);
        let naive = solver.enumerate(Semantics::Naive);
        assert_eq!(naive, solver.enumerate(Semantics::Stable));
        assert_eq!(naive, solver.enumerate(Semantics::Preferred));
    }
}

#[test]
fn fd_only_size_bound_matches_largest_repair() {
    let mut r = rng(12);
    for _ in 0..300 {
        let inst = random_instance(&mut r, InstanceClass::FdOnly, &InstanceParams::default());
        let largest = brute_force_repairs(&inst)
            .unwrap()
            .repairs
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0);
        let mut reasoner = Reasoner::new(&inst).unwrap();
        for k in 1..=inst.database().len() {
            assert_eq!(reasoner.repair_at_least(k).unwrap(), k <= largest);
        }
    }
}
