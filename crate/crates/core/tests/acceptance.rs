//! The fifteen acceptance criteria. Each one prints a PASS/FAIL line with
//! its wall time; the test fails if any criterion fails or overruns its cap.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use liquid_delegation::dynamics::{
    decide_br_conv, decide_ir_conv, reachable_equilibria, replay, run_dynamics, converging_permutation, Convergence,
    Mode, Outcome, Policy, TokenFunction, DEFAULT_MAX_STATES,
};
use liquid_delegation::exact::{enumerate_equilibria, optimize, solve_ex, solve_memb, Decision, Objective, DEFAULT_BUDGET};
use liquid_delegation::io::{catalog, generate, reference_trace, GeneratorKind, ProfileParams};
use liquid_delegation::kernel::{build_acceptability_digraph, enumerate_kernels, is_symmetric, symmetric_equilibrium_with_guru};
use liquid_delegation::model::{attainable, is_equilibrium, resolve_gurus};
use liquid_delegation::reductions::{from_3sat4, from_list_coloring, no_equilibrium_profile, CnfFormula, ListColoringInstance};
use liquid_delegation::tree_dp::{
    minphi, optimize_tree, solve_memb_tree, DissatisfactionPhi, RootedTree, StarSolver, ZeroPhi,
};
use liquid_delegation::{DelegationFunction, Instance, PreferenceProfile, SocialNetwork, Voter};
use rand::seq::SliceRandom;
use rand::Rng;

type Check = fn() -> Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn c1_guru_semantics() -> Result<(), String> {
    let file = catalog("ex1").map_err(|e| e.to_string())?;
    let d = file.delegation.ok_or("ex1 has no delegation")?;
    let res = resolve_gurus(&d);
    ensure!(res.gurus().iter().copied().eq([4, 5, 6]), "gurus {:?}", res.gurus());
    ensure!(res.gurus_by_voter() == [4, 5, 4, 4, 5, 6, 6, 6, 6], "gu {:?}", res.gurus_by_voter());
    let att = attainable(&file.instance, &d, 1);
    ensure!(att.iter().copied().eq([4, 5]), "Att(1) = {att:?}");
    ensure!(common::gurus(&common::choice_of(&d))[1..] == [4, 5, 4, 4, 5, 6, 6, 6, 6], "oracle disagrees");
    Ok(())
}

fn c2_no_equilibrium() -> Result<(), String> {
    let inst = catalog("threecycle").map_err(|e| e.to_string())?.instance;
    ensure!(solve_ex(&inst, DEFAULT_BUDGET) == Decision::No, "exact search found an equilibrium");
    ensure!(common::equilibria(&inst).is_empty(), "oracle found an equilibrium");
    Ok(())
}

/// Abstainer-free kernels by subset enumeration.
fn oracle_kernels(inst: &Instance) -> BTreeSet<Vec<Voter>> {
    let p = inst.profile();
    let vs: Vec<Voter> = inst.voters().filter(|&v| !p.is_abstainer(v)).collect();
    let mut out = BTreeSet::new();
    for mask in 0u32..1 << vs.len() {
        let set: Vec<Voter> = (0..vs.len()).filter(|&b| mask >> b & 1 == 1).map(|b| vs[b]).collect();
        let independent = set.iter().all(|&u| set.iter().all(|&v| !p.accepts(u, v)));
        let absorbing = vs.iter().filter(|v| !set.contains(v)).all(|&u| set.iter().any(|&v| p.accepts(u, v)));
        if independent && absorbing {
            out.insert(set);
        }
    }
    out
}

fn c3_kernel_equivalence() -> Result<(), String> {
    let mut r = common::rng(3);
    for case in 0..200 {
        let n = 1 + case % 7;
        let inst = common::random_instance(&mut r, SocialNetwork::complete(n), 3, 0.25);
        let equilibria = enumerate_equilibria(&inst, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let guru_sets: BTreeSet<Vec<Voter>> =
            equilibria.iter().map(|d| inst.voters().filter(|&i| d.get(i) == i).collect()).collect();
        let kernels: BTreeSet<Vec<Voter>> = enumerate_kernels(&build_acceptability_digraph(&inst), None).into_iter().collect();
        let oracle = oracle_kernels(&inst);
        ensure!(guru_sets == oracle, "case {case}: guru sets {guru_sets:?} vs kernels {oracle:?}");
        ensure!(kernels == oracle, "case {case}: library kernels {kernels:?} vs {oracle:?}");
    }
    Ok(())
}

fn random_symmetric(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> Instance {
    let mut acc: Vec<Vec<Voter>> = vec![Vec::new(); n + 1];
    for i in 1..=n {
        for j in i + 1..=n {
            if r.gen_bool(0.4) {
                acc[i].push(j);
                acc[j].push(i);
            }
        }
    }
    let lists: Vec<(bool, Vec<Voter>)> = (1..=n)
        .map(|i| {
            let mut l = acc[i].clone();
            l.shuffle(r);
            (r.gen_bool(0.2), l)
        })
        .collect();
    Instance::new(SocialNetwork::complete(n), PreferenceProfile::from_lists(lists).unwrap()).unwrap()
}

fn c4_symmetric() -> Result<(), String> {
    let mut r = common::rng(4);
    for case in 0..100 {
        let inst = random_symmetric(&mut r, 1 + case % 7);
        ensure!(is_symmetric(inst.profile()), "case {case}: generator broke symmetry");
        for i in inst.voters().filter(|&i| !inst.profile().is_abstainer(i)) {
            let d = symmetric_equilibrium_with_guru(&inst, i).map_err(|e| e.to_string())?;
            ensure!(d.get(i) == i, "case {case}: voter {i} is not a guru of {d}");
            ensure!(is_equilibrium(&inst, &d), "case {case}: {d} is not an equilibrium");
            ensure!(common::stable(&inst, &common::choice_of(&d)), "case {case}: oracle rejects {d}");
            let memb = solve_memb(&inst, i, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            ensure!(memb.is_yes(), "case {case}: exact MEMB says no for voter {i}");
        }
    }
    Ok(())
}

fn c5_trees_solvable() -> Result<(), String> {
    let mut r = common::rng(5);
    for case in 0..300 {
        let n = 1 + case % 12;
        let network = common::random_tree(&mut r, n);
        let inst = common::random_instance(&mut r, network, 4, 0.3);
        let tree = RootedTree::new(inst.network(), 1).map_err(|e| e.to_string())?;
        let sol = minphi(&inst, &tree, &ZeroPhi).map_err(|e| e.to_string())?;
        ensure!(sol.value == 0.0, "case {case}: value {}", sol.value);
        ensure!(is_equilibrium(&inst, &sol.witness), "case {case}: {} rejected", sol.witness);
        ensure!(common::stable(&inst, &common::choice_of(&sol.witness)), "case {case}: oracle rejects {}", sol.witness);
    }
    Ok(())
}

fn c6_converse() -> Result<(), String> {
    for k in 3..=6 {
        let network = SocialNetwork::cycle(k).unwrap();
        let cycle: Vec<Voter> = (1..=k).collect();
        let profile = no_equilibrium_profile(&network, &cycle).map_err(|e| e.to_string())?;
        let inst = Instance::new(network, profile).unwrap();
        ensure!(common::equilibria(&inst).is_empty(), "C{k}: oracle found an equilibrium");
        ensure!(solve_ex(&inst, DEFAULT_BUDGET) == Decision::No, "C{k}: exact search found an equilibrium");
    }
    Ok(())
}

fn c7_tree_dp_vs_oracle() -> Result<(), String> {
    let mut r = common::rng(7);
    for case in 0..200 {
        let n = 1 + case % 9;
        let network = common::random_tree(&mut r, n);
        let inst = common::random_instance(&mut r, network, 3, 0.3);
        for objective in Objective::ALL {
            let tree = optimize_tree(&inst, objective).map_err(|e| e.to_string())?;
            let exact = optimize(&inst, objective, DEFAULT_BUDGET);
            ensure!(exact.value() == Some(tree.value), "case {case} {objective:?}: tree {} exact {:?}", tree.value, exact.value());
            let witness = common::choice_of(&tree.witness);
            ensure!(common::stable(&inst, &witness), "case {case} {objective:?}: witness unstable");
            let (dis, vp, abst) = common::objectives(&inst, &witness);
            let got = match objective {
                Objective::Dissatisfaction => dis,
                Objective::MaxVotingPower => vp,
                Objective::Abstention => abst,
            };
            ensure!(got == tree.value, "case {case} {objective:?}: witness scores {got}");
        }
        for v in inst.voters().filter(|&v| !inst.profile().is_abstainer(v)) {
            let tree = solve_memb_tree(&inst, v).map_err(|e| e.to_string())?;
            let exact = solve_memb(&inst, v, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            ensure!(tree.is_yes() == exact.is_yes(), "case {case}: MEMB({v}) tree {} exact {}", tree.is_yes(), exact.is_yes());
            if let Some(d) = tree.witness() {
                ensure!(d.get(v) == v && is_equilibrium(&inst, d), "case {case}: bad MEMB({v}) witness {d}");
            }
        }
    }
    Ok(())
}

fn c8_star_fast_path() -> Result<(), String> {
    let mut r = common::rng(8);
    for case in 0..100 {
        let n = 1 + case % 9;
        let inst = common::random_instance(&mut r, SocialNetwork::star(n), 3, 0.3);
        let star = StarSolver::new(&inst).map_err(|e| e.to_string())?;
        for objective in Objective::ALL {
            let a = star.optimize(objective).value;
            let b = optimize_tree(&inst, objective).map_err(|e| e.to_string())?.value;
            ensure!(a == b, "case {case} {objective:?}: star {a} tree {b}");
        }
        let tree = RootedTree::new(inst.network(), star.center()).map_err(|e| e.to_string())?;
        let phi = DissatisfactionPhi(inst.profile());
        let (a, b) = (star.minphi(&phi).map_err(|e| e.to_string())?, minphi(&inst, &tree, &phi).map_err(|e| e.to_string())?);
        ensure!(a.value == b.value, "case {case}: minphi star {} tree {}", a.value, b.value);
        for v in inst.voters().filter(|&v| !inst.profile().is_abstainer(v)) {
            let a = star.memb(v).map_err(|e| e.to_string())?.is_yes();
            let b = solve_memb_tree(&inst, v).map_err(|e| e.to_string())?.is_yes();
            ensure!(a == b, "case {case}: MEMB({v}) star {a} tree {b}");
        }
    }
    Ok(())
}

fn satisfiable(f: &CnfFormula) -> bool {
    (0u32..1 << f.vars()).any(|mask| {
        f.clauses().iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = mask >> (lit.unsigned_abs() - 1) & 1 == 1;
                value == (lit > 0)
            })
        })
    })
}

/// Clauses as sets of distinct literals over `vars` variables, the empty clause included.
fn all_clauses(vars: usize) -> Vec<Vec<i64>> {
    let lits: Vec<i64> = (1..=vars as i64).flat_map(|v| [v, -v]).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << lits.len() {
        if mask.count_ones() <= 3 {
            out.push((0..lits.len()).filter(|&b| mask >> b & 1 == 1).map(|b| lits[b]).collect());
        }
    }
    out
}

fn c9_sat_reduction() -> Result<(), String> {
    let mut checked = 0;
    for vars in 1..=3 {
        let clauses = all_clauses(vars);
        let mut formulas: Vec<Vec<Vec<i64>>> = vec![vec![]];
        for a in 0..clauses.len() {
            formulas.push(vec![clauses[a].clone()]);
            for b in a..clauses.len() {
                formulas.push(vec![clauses[a].clone(), clauses[b].clone()]);
            }
        }
        for cls in formulas {
            let f = CnfFormula::new(vars, cls.clone()).map_err(|e| e.to_string())?;
            let r = from_3sat4(&f).map_err(|e| e.to_string())?;
            let inst = &r.instance;
            ensure!(inst.network().max_degree() <= 5, "{cls:?}: degree {}", inst.network().max_degree());
            ensure!(inst.maxa() <= 4, "{cls:?}: maxa {}", inst.maxa());
            let sat = satisfiable(&f);
            let ex = solve_ex(inst, DEFAULT_BUDGET);
            ensure!(ex != Decision::Unknown, "{cls:?}: budget exhausted");
            ensure!(sat == ex.is_yes(), "{cls:?}: SAT {sat}, EX {}", ex.is_yes());
            if let Some(d) = ex.witness() {
                let a = r.assignment_from_equilibrium(d);
                ensure!(f.is_satisfied_by(&a), "{cls:?}: equilibrium {d} decodes to a non-model {a:?}");
            }
            checked += 1;
        }
    }
    ensure!(checked > 1000, "only {checked} formulas");
    Ok(())
}

fn colorable(lc: &ListColoringInstance) -> bool {
    let n = lc.graph().n();
    let mut colors = vec![0u32; n];
    fn go(lc: &ListColoringInstance, k: usize, colors: &mut Vec<u32>) -> bool {
        if k == colors.len() {
            return lc.graph().edges().all(|(u, v)| colors[u - 1] != colors[v - 1]);
        }
        for &c in lc.list(k + 1) {
            colors[k] = c;
            if go(lc, k + 1, colors) {
                return true;
            }
        }
        false
    }
    go(lc, 0, &mut colors)
}

/// Graphs with at most two edges: every edge set of size ≤ 2 on 1..=3
/// vertices, plus the three perfect matchings of K4.
fn small_graphs() -> Vec<SocialNetwork> {
    let mut out = Vec::new();
    for n in 1..=3 {
        let all = SocialNetwork::complete(n).edges().collect::<Vec<_>>();
        out.push(SocialNetwork::empty(n));
        for (a, &e) in all.iter().enumerate() {
            out.push(SocialNetwork::new(n, [e]).unwrap());
            for &f in &all[a + 1..] {
                out.push(SocialNetwork::new(n, [e, f]).unwrap());
            }
        }
    }
    for m in [[(1, 2), (3, 4)], [(1, 3), (2, 4)], [(1, 4), (2, 3)]] {
        out.push(SocialNetwork::new(4, m).unwrap());
    }
    out
}

fn c10_list_coloring_reduction() -> Result<(), String> {
    let lists = [vec![1], vec![2], vec![1, 2]];
    let mut checked = 0;
    for g in small_graphs() {
        let n = g.n();
        for code in 0..3usize.pow(n as u32) {
            let assigned: Vec<Vec<u32>> = (0..n).map(|k| lists[code / 3usize.pow(k as u32) % 3].clone()).collect();
            let lc = ListColoringInstance::new(g.clone(), assigned.clone()).map_err(|e| e.to_string())?;
            let r = from_list_coloring(&lc).map_err(|e| e.to_string())?;
            let expected = colorable(&lc);
            let ex = solve_ex(&r.instance, DEFAULT_BUDGET);
            ensure!(ex != Decision::Unknown, "{assigned:?}: budget exhausted");
            ensure!(expected == ex.is_yes(), "edges {:?} lists {assigned:?}: colourable {expected}, EX {}", g.edges().collect::<Vec<_>>(), ex.is_yes());
            if let Some(d) = ex.witness() {
                let colors = r.coloring_from_equilibrium(d).ok_or("equilibrium without a colour per vertex")?;
                ensure!(lc.is_proper(&colors), "{assigned:?}: decoded colouring {colors:?} is not proper");
            }
            checked += 1;
        }
    }
    ensure!(checked >= 400, "only {checked} instances");
    Ok(())
}

fn replay_entry(name: &str, mode: Mode) -> Result<liquid_delegation::dynamics::DynamicsTrace, String> {
    let started = Instant::now();
    let inst = catalog(name).map_err(|e| e.to_string())?.instance;
    let moves = reference_trace(name).ok_or("no trace")?;
    let trace = replay(&inst, &DelegationFunction::all_vote(inst.n()), mode, moves).map_err(|e| e.to_string())?;
    ensure!(trace.moves() == moves, "{name}: moves differ");
    ensure!(trace.steps.windows(2).all(|w| w[0].t + 1 == w[1].t), "{name}: steps not consecutive");
    for (k, step) in trace.steps.iter().enumerate() {
        let before = trace.state_at(k);
        let after = trace.state_at(k + 1);
        ensure!(step.digest == after.digest(), "{name}: digest of d_{}", k + 1);
        let differing: Vec<Voter> = (1..=inst.n()).filter(|&i| before.get(i) != after.get(i)).collect();
        ensure!(differing.iter().all(|&i| i == step.voter), "{name}: step {} touches {differing:?}", k + 1);
    }
    ensure!(started.elapsed() < Duration::from_secs(1), "{name}: replay took {:?}", started.elapsed());
    Ok(trace)
}

fn c11_traces() -> Result<(), String> {
    let t12 = replay_entry("thm12", Mode::Brd)?;
    ensure!(t12.steps[7].digest == t12.steps[19].digest, "thm12: d_20 differs from d_8");
    ensure!(t12.state_at(20) == t12.state_at(8), "thm12: states differ");
    ensure!(matches!(t12.outcome, Outcome::CycleDetected { .. }), "thm12: {:?}", t12.outcome);
    let t15 = replay_entry("thm15", Mode::Brd)?;
    ensure!(t15.steps[4].digest == t15.steps[18].digest, "thm15: d_19 differs from d_5");
    ensure!(resolve_gurus(&t15.state_at(19)).gurus_by_voter() == [5; 5], "thm15: not everybody follows 5");
    ensure!(matches!(t15.outcome, Outcome::CycleDetected { .. }), "thm15: {:?}", t15.outcome);
    let t16 = replay_entry("thm16", Mode::Ird)?;
    ensure!(t16.steps[0].digest == t16.steps[10].digest, "thm16: d_11 differs from d_1");
    ensure!(matches!(t16.outcome, Outcome::CycleDetected { .. }), "thm16: {:?}", t16.outcome);
    Ok(())
}

fn c12_star_convergence() -> Result<(), String> {
    let thm16 = catalog("thm16").map_err(|e| e.to_string())?.instance;
    ensure!(inspect(decide_br_conv(&thm16, None, DEFAULT_MAX_STATES))?, "thm16: BRD can diverge");
    match decide_ir_conv(&thm16, None, DEFAULT_MAX_STATES).map_err(|e| e.to_string())? {
        Convergence::ConvergesAlways => return Err("thm16: IRD reported convergent".into()),
        Convergence::Diverges(trace) => {
            ensure!(matches!(trace.outcome, Outcome::CycleDetected { .. }), "thm16: witness {:?}", trace.outcome);
            let again = replay(&thm16, &trace.start, Mode::Ird, &trace.moves()).map_err(|e| e.to_string())?;
            ensure!(again == trace, "thm16: witness does not replay");
        }
    }
    let mut r = common::rng(12);
    for case in 0..60 {
        let n = 3 + case % 3;
        let inst = common::random_instance(&mut r, SocialNetwork::star(n), 3, 0.0);
        ensure!(inspect(decide_br_conv(&inst, None, DEFAULT_MAX_STATES))?, "star case {case}: BRD can diverge");
    }
    Ok(())
}

fn inspect(r: Result<Convergence, liquid_delegation::dynamics::DynamicsError>) -> Result<bool, String> {
    Ok(matches!(r.map_err(|e| e.to_string())?, Convergence::ConvergesAlways))
}

fn c13_not_weakly_acyclic() -> Result<(), String> {
    let file = catalog("thm13").map_err(|e| e.to_string())?;
    let inst = file.instance;
    let d0 = file.delegation.ok_or("thm13 has no start")?;
    ensure!(d0.choices() == [2, 2, 3, 4, 5], "unexpected start {d0}");
    let equilibria = enumerate_equilibria(&inst, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let guru_vectors: BTreeSet<Vec<Voter>> = equilibria.iter().map(|d| resolve_gurus(d).gurus_by_voter().to_vec()).collect();
    ensure!(guru_vectors.len() == 1 && guru_vectors.contains(&vec![1; 5]), "guru vectors {guru_vectors:?}");
    for mode in [Mode::Ird, Mode::Brd] {
        let reached = reachable_equilibria(&inst, &d0, mode, DEFAULT_MAX_STATES).map_err(|e| e.to_string())?;
        ensure!(reached.is_empty(), "{mode}: reached {:?}", reached.first());
    }
    Ok(())
}

fn c14_converging_permutation() -> Result<(), String> {
    let mut r = common::rng(14);
    let mut tried = 0;
    let mut case = 0;
    while tried < 120 {
        case += 1;
        let n = 2 + case % 6;
        let inst = common::random_instance(&mut r, SocialNetwork::complete(n), 3, 0.2);
        let Decision::Yes(target) = solve_ex(&inst, DEFAULT_BUDGET) else { continue };
        tried += 1;
        let sigma = converging_permutation(&inst, &target).map_err(|e| e.to_string())?;
        let token = TokenFunction::permutation(n, sigma.clone()).map_err(|e| e.to_string())?;
        let trace = run_dynamics(&inst, &DelegationFunction::all_vote(n), &token, Mode::Brd, &Policy::Default, 50 * n)
            .map_err(|e| e.to_string())?;
        let Outcome::Converged { state, .. } = &trace.outcome else {
            return Err(format!("case {case}: σ={sigma:?} gives {:?}", trace.outcome));
        };
        let want: Vec<Voter> = inst.voters().filter(|&i| target.get(i) == i).collect();
        let got: Vec<Voter> = inst.voters().filter(|&i| state.get(i) == i).collect();
        ensure!(want == got, "case {case}: gurus {got:?}, wanted {want:?}");
        ensure!(is_equilibrium(&inst, state), "case {case}: final state {state} unstable");
    }
    Ok(())
}

fn c15_scaling() -> Result<(), String> {
    let params = ProfileParams { maxa_cap: 3, abstainer_prob: 0.2, edge_prob: 0.0 };
    let time_at = |n: usize| -> Result<f64, String> {
        let mut best = f64::INFINITY;
        for rep in 0..3 {
            let started = Instant::now();
            for seed in 0..4 {
                let inst = generate(GeneratorKind::Tree, n, 1000 * rep + seed, &params).map_err(|e| e.to_string())?;
                let tree = RootedTree::new(inst.network(), 1).map_err(|e| e.to_string())?;
                minphi(&inst, &tree, &DissatisfactionPhi(inst.profile())).map_err(|e| e.to_string())?;
            }
            best = best.min(started.elapsed().as_secs_f64());
        }
        Ok(best)
    };
    let times = [time_at(50)?, time_at(100)?, time_at(200)?];
    println!("    minphi times for n = 50, 100, 200: {:.4} s, {:.4} s, {:.4} s", times[0], times[1], times[2]);
    for w in times.windows(2) {
        ensure!(w[1].le(&(10.0 * w[0].max(1e-4))), "growth {:.1}x per doubling", w[1] / w[0]);
    }
    Ok(())
}

fn main() {
    let criteria: [(usize, &str, u64, Check); 15] = [
        (1, "guru semantics on ex1", 1, c1_guru_semantics),
        (2, "threecycle has no equilibrium", 1, c2_no_equilibrium),
        (3, "equilibrium guru sets are the kernels", 60, c3_kernel_equivalence),
        (4, "symmetric complete instances", 60, c4_symmetric),
        (5, "trees always have an equilibrium", 60, c5_trees_solvable),
        (6, "chordless-cycle profiles have none", 30, c6_converse),
        (7, "tree DP matches exhaustive search", 120, c7_tree_dp_vs_oracle),
        (8, "star fast path matches tree DP", 30, c8_star_fast_path),
        (9, "3-SAT-4 reduction", 120, c9_sat_reduction),
        (10, "list-colouring reduction", 120, c10_list_coloring_reduction),
        (11, "scripted dynamics traces", 3, c11_traces),
        (12, "BR-CONV on stars", 60, c12_star_convergence),
        (13, "unreachable equilibrium", 10, c13_not_weakly_acyclic),
        (14, "converging permutation", 60, c14_converging_permutation),
        (15, "minphi scaling", 120, c15_scaling),
    ];
    let mut failures = Vec::new();
    for (id, name, cap, check) in criteria {
        let started = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = started.elapsed();
        let result = result.and_then(|()| {
            if elapsed > Duration::from_secs(cap) {
                Err(format!("took {:.1} s, cap {cap} s", elapsed.as_secs_f64()))
            } else {
                Ok(())
            }
        });
        match &result {
            Ok(()) => println!("criterion {id:>2}: PASS ({:.2} s) {name}", elapsed.as_secs_f64()),
            Err(why) => {
                println!("criterion {id:>2}: FAIL ({:.2} s) {name}: {why}", elapsed.as_secs_f64());
                failures.push(id);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
