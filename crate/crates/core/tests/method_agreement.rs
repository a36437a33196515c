//! Every applicable method gives the same decisions and optimal values.

mod common;

use liquid_delegation::exact::{optimize, solve_ex, solve_memb, Objective, SolveError, DEFAULT_BUDGET};
use liquid_delegation::io::{catalog, catalog_names, generate, GeneratorKind, ProfileParams};
use liquid_delegation::kernel::{build_acceptability_digraph, enumerate_kernels, enumerate_kernels_containing, equilibrium_from_kernel};
use liquid_delegation::model::is_equilibrium;
use liquid_delegation::tree_dp::{optimize_tree, solve_memb_tree, StarSolver, TreeError};
use liquid_delegation::Instance;

fn check(label: &str, inst: &Instance) {
    let network = inst.network();
    let ex = solve_ex(inst, DEFAULT_BUDGET);
    assert!(!matches!(ex, liquid_delegation::exact::Decision::Unknown), "{label}: budget");
    if let Some(d) = ex.witness() {
        assert!(common::stable(inst, &common::choice_of(d)), "{label}: oracle rejects {d}");
    }
    if network.is_complete() {
        let g = build_acceptability_digraph(inst);
        let kernels = enumerate_kernels(&g, Some(1));
        assert_eq!(ex.is_yes(), !kernels.is_empty(), "{label}: EX brute vs kernel");
        if let Some(k) = kernels.first() {
            assert!(is_equilibrium(inst, &equilibrium_from_kernel(inst, k).unwrap()), "{label}");
        }
        for v in inst.voters() {
            let brute = match solve_memb(inst, v, DEFAULT_BUDGET) {
                Err(SolveError::AbstainerQuery(_)) => false,
                other => other.unwrap().is_yes(),
            };
            let kernel = !inst.profile().is_abstainer(v) && !enumerate_kernels_containing(&g, v, Some(1)).is_empty();
            assert_eq!(brute, kernel, "{label}: MEMB({v}) brute vs kernel");
        }
    }
    if network.is_forest() {
        assert!(ex.is_yes(), "{label}: forest without equilibrium");
        for objective in Objective::ALL {
            let brute = optimize(inst, objective, DEFAULT_BUDGET).value();
            let tree = optimize_tree(inst, objective).unwrap();
            assert_eq!(brute, Some(tree.value), "{label}: {objective:?} brute vs tree");
        }
        for v in inst.voters() {
            let brute = match solve_memb(inst, v, DEFAULT_BUDGET) {
                Err(SolveError::AbstainerQuery(_)) => false,
                other => other.unwrap().is_yes(),
            };
            let tree = match solve_memb_tree(inst, v) {
                Err(TreeError::AbstainerQuery(_)) => false,
                other => other.unwrap().is_yes(),
            };
            assert_eq!(brute, tree, "{label}: MEMB({v}) brute vs tree");
        }
        if let Ok(star) = StarSolver::new(inst) {
            for objective in Objective::ALL {
                assert_eq!(star.optimize(objective), optimize_tree(inst, objective).unwrap(), "{label}: star {objective:?}");
            }
        }
    }
}

#[test]
fn catalog_entries() {
    for name in catalog_names() {
        check(name, &catalog(name).unwrap().instance);
    }
}

#[test]
fn generated_instances() {
    for kind in GeneratorKind::ALL {
        for n in 1..=7 {
            for seed in 0..6 {
                let params = ProfileParams {
                    maxa_cap: 1 + (seed as usize) % 4,
                    abstainer_prob: 0.25,
                    edge_prob: 0.4,
                };
                let inst = generate(kind, n, seed, &params).unwrap();
                check(&format!("{kind} n={n} seed={seed}"), &inst);
            }
        }
    }
}
