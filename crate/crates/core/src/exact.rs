//! Backtracking search over all delegation functions.
//!
//! This is the ground truth used to check every other solver. Voters are
//! assigned in index order, each trying vote, abstain, then neighbours in
//! ascending order, so results come out in a fixed lexicographic order.
//! A branch is cut only when some voter whose guru is already fixed
//! provably violates stability.

use std::ops::ControlFlow;

use thiserror::Error;

use crate::model::{
    guru_is_admissible, is_equilibrium, measures, DelegationFunction, Instance, Measures, Voter,
    ABSTAIN,
};

/// Default cap on assigned-node expansions.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("search budget of {budget} node expansions exceeded ({found} equilibria found so far)")]
    BudgetExceeded { budget: u64, found: usize },
    #[error("voter {0} is an abstainer and cannot be a guru")]
    AbstainerQuery(Voter),
    #[error("voter {voter} is outside 1..={n}")]
    NoSuchVoter { voter: Voter, n: usize },
}

/// Answer to a yes/no question that may run out of budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes(DelegationFunction),
    No,
    Unknown,
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn witness(&self) -> Option<&DelegationFunction> {
        match self {
            Decision::Yes(d) => Some(d),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    /// MINDIS: total rank loss.
    Dissatisfaction,
    /// MINMAXVP: largest voting power.
    MaxVotingPower,
    /// MINABST: number of voters with guru 0.
    Abstention,
}

impl Objective {
    pub const ALL: [Objective; 3] = [
        Objective::Dissatisfaction,
        Objective::MaxVotingPower,
        Objective::Abstention,
    ];

    pub fn value(self, m: &Measures) -> usize {
        match self {
            Objective::Dissatisfaction => m.dissatisfaction,
            Objective::MaxVotingPower => m.max_voting_power,
            Objective::Abstention => m.abstention_count,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Optimum {
    Optimal {
        value: usize,
        witness: DelegationFunction,
    },
    Infeasible,
    Unknown,
}

impl Optimum {
    pub fn value(&self) -> Option<usize> {
        match self {
            Optimum::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }
}

const UNASSIGNED: Voter = usize::MAX;
const UNKNOWN: Voter = usize::MAX;

struct Search<'a> {
    instance: &'a Instance,
    domains: Vec<Vec<Voter>>,
    assignment: Vec<Voter>,
    nodes: u64,
    budget: u64,
    found: usize,
    // scratch buffers for partial guru resolution
    gu: Vec<Voter>,
    state: Vec<u8>,
    path: Vec<Voter>,
}

impl<'a> Search<'a> {
    fn new(instance: &'a Instance, budget: u64) -> Self {
        let n = instance.n();
        let mut domains = vec![Vec::new(); n + 1];
        for i in instance.voters() {
            domains[i].push(i);
            domains[i].push(ABSTAIN);
            domains[i].extend_from_slice(instance.network().neighbors(i));
        }
        Search {
            instance,
            domains,
            assignment: vec![UNASSIGNED; n + 1],
            nodes: 0,
            budget,
            found: 0,
            gu: vec![UNKNOWN; n + 1],
            state: vec![0; n + 1],
            path: Vec::new(),
        }
    }

    /// Gurus fixed by the partial assignment; `UNKNOWN` where a chain
    /// reaches an unassigned voter.
    fn resolve_partial(&mut self) {
        let n = self.instance.n();
        self.state.iter_mut().for_each(|s| *s = 0);
        for start in 1..=n {
            if self.state[start] == 2 {
                continue;
            }
            self.path.clear();
            let mut cur = start;
            let guru = loop {
                match self.state[cur] {
                    2 => break self.gu[cur],
                    1 => break ABSTAIN,
                    _ => {}
                }
                self.state[cur] = 1;
                self.path.push(cur);
                let next = self.assignment[cur];
                if next == UNASSIGNED {
                    break UNKNOWN;
                }
                if next == cur {
                    break cur;
                }
                if next == ABSTAIN {
                    break ABSTAIN;
                }
                cur = next;
            };
            for &v in &self.path {
                self.gu[v] = guru;
                self.state[v] = 2;
            }
        }
    }

    /// Sound test: false only if no completion can be an equilibrium.
    fn consistent(&mut self) -> bool {
        self.resolve_partial();
        let profile = self.instance.profile();
        let network = self.instance.network();
        for i in self.instance.voters() {
            let g = self.gu[i];
            if g == UNKNOWN {
                continue;
            }
            if !guru_is_admissible(profile, i, g) {
                return false;
            }
            let r = profile.rank(i, g);
            for &j in network.neighbors(i) {
                let h = self.gu[j];
                if h != UNKNOWN && h != g && profile.rank(i, h) <= r {
                    return false;
                }
            }
        }
        true
    }

    fn run<F>(&mut self, visit: &mut F) -> Result<ControlFlow<()>, SolveError>
    where
        F: FnMut(&DelegationFunction) -> ControlFlow<()>,
    {
        self.descend(1, visit)
    }

    fn descend<F>(&mut self, voter: Voter, visit: &mut F) -> Result<ControlFlow<()>, SolveError>
    where
        F: FnMut(&DelegationFunction) -> ControlFlow<()>,
    {
        let n = self.instance.n();
        if voter > n {
            let mut raw = self.assignment.clone();
            raw[0] = ABSTAIN;
            let d = DelegationFunction::from_raw(raw);
            debug_assert!(is_equilibrium(self.instance, &d));
            self.found += 1;
            return Ok(visit(&d));
        }
        for k in 0..self.domains[voter].len() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(SolveError::BudgetExceeded {
                    budget: self.budget,
                    found: self.found,
                });
            }
            self.assignment[voter] = self.domains[voter][k];
            if self.consistent() && self.descend(voter + 1, visit)?.is_break() {
                self.assignment[voter] = UNASSIGNED;
                return Ok(ControlFlow::Break(()));
            }
        }
        self.assignment[voter] = UNASSIGNED;
        Ok(ControlFlow::Continue(()))
    }
}

/// Calls `visit` on every equilibrium in lexicographic order until it breaks.
pub fn for_each_equilibrium<F>(instance: &Instance, budget: u64, mut visit: F) -> Result<(), SolveError>
where
    F: FnMut(&DelegationFunction) -> ControlFlow<()>,
{
    Search::new(instance, budget).run(&mut visit).map(|_| ())
}

/// Every equilibrium of the instance.
pub fn enumerate_equilibria(instance: &Instance, budget: u64) -> Result<Vec<DelegationFunction>, SolveError> {
    let mut all = Vec::new();
    for_each_equilibrium(instance, budget, |d| {
        all.push(d.clone());
        ControlFlow::Continue(())
    })?;
    Ok(all)
}

/// EX: does an equilibrium exist?
pub fn solve_ex(instance: &Instance, budget: u64) -> Decision {
    let mut witness = None;
    let result = for_each_equilibrium(instance, budget, |d| {
        witness = Some(d.clone());
        ControlFlow::Break(())
    });
    match (witness, result) {
        (Some(d), _) => Decision::Yes(d),
        (None, Ok(())) => Decision::No,
        (None, Err(_)) => Decision::Unknown,
    }
}

/// MEMB: is there an equilibrium in which `voter` is a guru?
pub fn solve_memb(instance: &Instance, voter: Voter, budget: u64) -> Result<Decision, SolveError> {
    if voter == 0 || voter > instance.n() {
        return Err(SolveError::NoSuchVoter {
            voter,
            n: instance.n(),
        });
    }
    if instance.profile().is_abstainer(voter) {
        return Err(SolveError::AbstainerQuery(voter));
    }
    let mut search = Search::new(instance, budget);
    // being a guru means voting
    search.domains[voter] = vec![voter];
    let mut witness = None;
    let result = search.run(&mut |d: &DelegationFunction| {
        witness = Some(d.clone());
        ControlFlow::Break(())
    });
    Ok(match (witness, result) {
        (Some(d), _) => Decision::Yes(d),
        (None, Ok(_)) => Decision::No,
        (None, Err(_)) => Decision::Unknown,
    })
}

/// Exact optimum of `objective` over all equilibria; the witness is the
/// lexicographically first optimal equilibrium.
pub fn optimize(instance: &Instance, objective: Objective, budget: u64) -> Optimum {
    let mut best: Option<(usize, DelegationFunction)> = None;
    let result = for_each_equilibrium(instance, budget, |d| {
        let value = objective.value(&measures(instance, d));
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, d.clone()));
        }
        ControlFlow::Continue(())
    });
    match (result, best) {
        (Err(_), _) => Optimum::Unknown,
        (Ok(()), None) => Optimum::Infeasible,
        (Ok(()), Some((value, witness))) => Optimum::Optimal { value, witness },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{resolve_gurus, PreferenceProfile, SocialNetwork};

    fn complete(lists: Vec<(bool, Vec<Voter>)>) -> Instance {
        let n = lists.len();
        Instance::new(SocialNetwork::complete(n), PreferenceProfile::from_lists(lists).unwrap()).unwrap()
    }

    fn thm13() -> Instance {
        complete(vec![
            (false, vec![2]),
            (false, vec![1]),
            (false, vec![1, 4]),
            (false, vec![1, 5]),
            (false, vec![1, 3]),
        ])
    }

    /// Plain enumeration of the full product space, no pruning.
    fn naive(instance: &Instance) -> Vec<DelegationFunction> {
        let n = instance.n();
        let domains: Vec<Vec<Voter>> = instance
            .voters()
            .map(|i| {
                let mut dom = vec![i, ABSTAIN];
                dom.extend_from_slice(instance.network().neighbors(i));
                dom
            })
            .collect();
        let mut idx = vec![0usize; n];
        let mut out = Vec::new();
        loop {
            let choices = (0..n).map(|k| domains[k][idx[k]]).collect();
            let d = DelegationFunction::new(instance.network(), choices).unwrap();
            if is_equilibrium(instance, &d) {
                out.push(d);
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < domains[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    #[test]
    fn three_cycle_has_none() {
        let inst = complete(vec![(false, vec![2]), (false, vec![3]), (false, vec![1])]);
        assert!(enumerate_equilibria(&inst, DEFAULT_BUDGET).unwrap().is_empty());
        assert_eq!(solve_ex(&inst, DEFAULT_BUDGET), Decision::No);
        for obj in Objective::ALL {
            assert_eq!(optimize(&inst, obj, DEFAULT_BUDGET), Optimum::Infeasible);
        }
    }

    #[test]
    fn thm13_every_equilibrium_funnels_to_voter_one() {
        let inst = thm13();
        let eqs = enumerate_equilibria(&inst, DEFAULT_BUDGET).unwrap();
        assert!(!eqs.is_empty());
        for d in &eqs {
            assert_eq!(resolve_gurus(d).gurus_by_voter(), &[1, 1, 1, 1, 1]);
        }
        assert!(solve_memb(&inst, 1, DEFAULT_BUDGET).unwrap().is_yes());
        assert_eq!(solve_memb(&inst, 3, DEFAULT_BUDGET).unwrap(), Decision::No);
        assert_eq!(optimize(&inst, Objective::MaxVotingPower, DEFAULT_BUDGET).value(), Some(5));
    }

    #[test]
    fn single_voter() {
        let inst = Instance::new(SocialNetwork::empty(1), PreferenceProfile::new(1)).unwrap();
        assert_eq!(
            enumerate_equilibria(&inst, DEFAULT_BUDGET).unwrap(),
            vec![DelegationFunction::all_vote(1)]
        );
    }

    #[test]
    fn all_vote_unique_gives_zero_dissatisfaction() {
        let inst = complete(vec![(false, vec![]); 4]);
        let eqs = enumerate_equilibria(&inst, DEFAULT_BUDGET).unwrap();
        assert_eq!(eqs, vec![DelegationFunction::all_vote(4)]);
        assert_eq!(optimize(&inst, Objective::Dissatisfaction, DEFAULT_BUDGET).value(), Some(0));
    }

    #[test]
    fn budget_is_reported_distinctly() {
        let inst = thm13();
        assert!(matches!(
            enumerate_equilibria(&inst, 10),
            Err(SolveError::BudgetExceeded { budget: 10, .. })
        ));
        assert_eq!(solve_ex(&complete(vec![(false, vec![2]), (false, vec![3]), (false, vec![1])]), 3), Decision::Unknown);
        assert_eq!(optimize(&inst, Objective::Abstention, 10), Optimum::Unknown);
    }

    #[test]
    fn memb_rejects_abstainer() {
        let inst = complete(vec![(true, vec![]), (false, vec![])]);
        assert_eq!(solve_memb(&inst, 1, DEFAULT_BUDGET), Err(SolveError::AbstainerQuery(1)));
    }

    #[test]
    fn pruned_search_matches_naive_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let n = rng.gen_range(1..=5);
            let mut edges = Vec::new();
            for i in 1..=n {
                for j in (i + 1)..=n {
                    if rng.gen_bool(0.5) {
                        edges.push((i, j));
                    }
                }
            }
            let lists: Vec<_> = (1..=n)
                .map(|i| {
                    let acc: Vec<Voter> = (1..=n).filter(|&j| j != i && rng.gen_bool(0.4)).collect();
                    (rng.gen_bool(0.2), acc)
                })
                .collect();
            let inst = Instance::new(
                SocialNetwork::new(n, edges).unwrap(),
                PreferenceProfile::from_lists(lists).unwrap(),
            )
            .unwrap();
            assert_eq!(enumerate_equilibria(&inst, DEFAULT_BUDGET).unwrap(), naive(&inst));
        }
    }
}
