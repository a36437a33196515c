//! Delegation dynamics: one voter at a time, chosen by a token function,
//! replaces their delegation by an improving (IRD) or best (BRD) move.
//!
//! Besides the moves to neighbours and to abstention, a voter may also go
//! back to voting herself. Every step changes at most the token holder's
//! entry.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::model::{guru_of, is_equilibrium, resolve_gurus, DelegationFunction, Instance, ModelError, Voter, ABSTAIN};

/// Default cap on the number of states explored by the decision procedures.
pub const DEFAULT_MAX_STATES: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("invalid starting delegation: {0}")]
    InvalidStart(#[from] ModelError),
    #[error("token function is empty")]
    EmptyToken,
    #[error("token function is not a permutation of 1..={n}")]
    NotAPermutation { n: usize },
    #[error("token entry {entry} is not a voter of 1..={n}")]
    TokenOutOfRange { entry: Voter, n: usize },
    #[error("voter {0} never holds the token")]
    TokenMissesVoter(Voter),
    #[error("token function is for {token} voters but the instance has {instance}")]
    SizeMismatch { token: usize, instance: usize },
    #[error("step {t}: move {voter} -> {target} is not allowed under {mode}")]
    IllegalMove { t: usize, voter: Voter, target: Voter, mode: Mode },
    #[error("state space exceeds {max_states} states")]
    BudgetExceeded { max_states: usize },
    #[error("the social network is not complete")]
    NotComplete,
    #[error("the delegation function is not an equilibrium")]
    NotAnEquilibrium,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Improved-response dynamics.
    Ird,
    /// Best-response dynamics.
    Brd,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ird => "ird",
            Mode::Brd => "brd",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Permutation,
    Sequence,
}

/// `T(t)`: repeats a permutation, or an explicit sequence, forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenFunction {
    kind: TokenKind,
    n: usize,
    order: Vec<Voter>,
}

impl TokenFunction {
    pub fn permutation(n: usize, sigma: Vec<Voter>) -> Result<Self, DynamicsError> {
        let mut seen = vec![false; n + 1];
        for &v in &sigma {
            if v == 0 || v > n || std::mem::replace(&mut seen[v], true) {
                return Err(DynamicsError::NotAPermutation { n });
            }
        }
        if sigma.len() != n {
            return Err(DynamicsError::NotAPermutation { n });
        }
        Ok(TokenFunction {
            kind: TokenKind::Permutation,
            n,
            order: sigma,
        })
    }

    /// The identity permutation `1, 2, …, n`.
    pub fn identity(n: usize) -> Self {
        TokenFunction {
            kind: TokenKind::Permutation,
            n,
            order: (1..=n).collect(),
        }
    }

    /// A finite sequence repeated cyclically; every voter must occur.
    pub fn sequence(n: usize, seq: Vec<Voter>) -> Result<Self, DynamicsError> {
        if seq.is_empty() {
            return Err(DynamicsError::EmptyToken);
        }
        let mut seen = vec![false; n + 1];
        for &v in &seq {
            if v == 0 || v > n {
                return Err(DynamicsError::TokenOutOfRange { entry: v, n });
            }
            seen[v] = true;
        }
        if let Some(v) = (1..=n).find(|&v| !seen[v]) {
            return Err(DynamicsError::TokenMissesVoter(v));
        }
        Ok(TokenFunction {
            kind: TokenKind::Sequence,
            n,
            order: seq,
        })
    }

    pub fn kind(&self) -> TokenKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> &[Voter] {
        &self.order
    }

    /// Length of one token cycle.
    pub fn period(&self) -> usize {
        self.order.len()
    }

    /// Token holder at step `t ≥ 1`.
    pub fn holder(&self, t: usize) -> Voter {
        self.order[(t - 1) % self.order.len()]
    }
}

/// How the token holder picks among the allowed moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Best-ranked resulting guru, keeping the current delegation on ties,
    /// otherwise the smallest target. Used for both IRD and BRD.
    Default,
    /// The target to play at each step, checked against the mode.
    Scripted(Vec<Voter>),
}

/// Guru of `i` after switching to `j`, chains re-resolved in full.
fn guru_after_move(d: &DelegationFunction, i: Voter, j: Voter) -> Voter {
    if j == ABSTAIN || j == i {
        return j;
    }
    let mut cur = j;
    for _ in 0..=d.n() {
        if cur == i {
            // the chain comes back to i: a circuit
            return ABSTAIN;
        }
        let next = d.get(cur);
        if next == cur || next == ABSTAIN {
            return next;
        }
        cur = next;
    }
    ABSTAIN
}

/// Candidate targets of `i` with the guru each one yields; neighbours whose
/// chain ends in abstention or a circuit are left out.
fn move_options(instance: &Instance, d: &DelegationFunction, i: Voter) -> Vec<(Voter, Voter)> {
    let mut options: Vec<(Voter, Voter)> = vec![(ABSTAIN, ABSTAIN), (i, i)];
    for &j in instance.network().neighbors(i) {
        let g = guru_after_move(d, i, j);
        if g != ABSTAIN {
            options.push((j, g));
        }
    }
    options.sort_unstable();
    options
}

fn improving_with_gurus(instance: &Instance, d: &DelegationFunction, i: Voter) -> Vec<(Voter, Voter)> {
    let profile = instance.profile();
    let current = guru_of(d, i);
    move_options(instance, d, i)
        .into_iter()
        .filter(|&(_, g)| profile.prefers(i, g, current))
        .collect()
}

/// `I_d(i)`: targets whose resulting guru `i` strictly prefers to the current one.
pub fn improving_moves(instance: &Instance, d: &DelegationFunction, i: Voter) -> BTreeSet<Voter> {
    improving_with_gurus(instance, d, i).into_iter().map(|(j, _)| j).collect()
}

/// `B_d(i)`: the improving targets with the best resulting guru, or
/// `{d(i)}` when nothing improves.
pub fn best_moves(instance: &Instance, d: &DelegationFunction, i: Voter) -> BTreeSet<Voter> {
    let improving = improving_with_gurus(instance, d, i);
    let profile = instance.profile();
    match improving.iter().map(|&(_, g)| profile.rank(i, g)).min() {
        None => BTreeSet::from([d.get(i)]),
        Some(best) => improving
            .into_iter()
            .filter(|&(_, g)| profile.rank(i, g) == best)
            .map(|(j, _)| j)
            .collect(),
    }
}

fn default_choice(instance: &Instance, d: &DelegationFunction, i: Voter) -> Voter {
    let best = best_moves(instance, d, i);
    if best.contains(&d.get(i)) {
        d.get(i)
    } else {
        *best.first().expect("best moves are never empty")
    }
}

fn is_legal(instance: &Instance, d: &DelegationFunction, i: Voter, j: Voter, mode: Mode) -> bool {
    match mode {
        Mode::Brd => best_moves(instance, d, i).contains(&j),
        Mode::Ird => {
            let improving = improving_moves(instance, d, i);
            improving.contains(&j) || (improving.is_empty() && j == d.get(i))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub t: usize,
    pub voter: Voter,
    pub target: Voter,
    pub changed: bool,
    /// Digest of `d_t`.
    pub digest: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// `d_t = state` for every `t ≥ t_star`.
    Converged { state: DelegationFunction, t_star: usize },
    /// `d_first = d_second`, and the steps in between repeat forever.
    CycleDetected { first: usize, second: usize, period: usize },
    /// The step budget, or the script, ran out first.
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicsTrace {
    pub mode: Mode,
    pub start: DelegationFunction,
    pub steps: Vec<Step>,
    pub outcome: Outcome,
}

impl DynamicsTrace {
    /// `d_t`, with `d_0` the start.
    pub fn state_at(&self, t: usize) -> DelegationFunction {
        let mut d = self.start.clone();
        for step in &self.steps[..t] {
            d.set(step.voter, step.target);
        }
        d
    }

    pub fn final_state(&self) -> DelegationFunction {
        self.state_at(self.steps.len())
    }

    /// `(voter, target)` of every step.
    pub fn moves(&self) -> Vec<(Voter, Voter)> {
        self.steps.iter().map(|s| (s.voter, s.target)).collect()
    }
}

/// Simulates the dynamics for at most `max_steps` steps.
///
/// With the default policy the run is deterministic, so a repeated pair of
/// state and token phase is an exact cycle, and convergence is declared once
/// every voter has held the token since the last change. A scripted run
/// reports a cycle at the first repeated state whose intervening steps give
/// the token to every voter.
pub fn run_dynamics(
    instance: &Instance,
    start: &DelegationFunction,
    token: &TokenFunction,
    mode: Mode,
    policy: &Policy,
    max_steps: usize,
) -> Result<DynamicsTrace, DynamicsError> {
    let n = instance.n();
    start.validate(instance.network())?;
    if token.n() != n {
        return Err(DynamicsError::SizeMismatch {
            token: token.n(),
            instance: n,
        });
    }
    let scripted = match policy {
        Policy::Default => None,
        Policy::Scripted(targets) => Some(targets),
    };
    let horizon = scripted.map_or(max_steps, |s| s.len().min(max_steps));

    let mut d = start.clone();
    let mut steps = Vec::new();
    // voters that held the token since the last change
    let mut idle = vec![false; n + 1];
    let mut idle_count = 0;
    let mut last_change = 0;
    let mut seen_phase: HashMap<(DelegationFunction, usize), usize> = HashMap::new();
    let mut seen_state: HashMap<DelegationFunction, Vec<usize>> = HashMap::new();
    let mut holders = Vec::with_capacity(horizon);
    match scripted {
        None => {
            seen_phase.insert((d.clone(), 0), 0);
        }
        Some(_) => {
            seen_state.entry(d.clone()).or_default().push(0);
        }
    }

    let mut outcome = Outcome::BudgetExceeded;
    for t in 1..=horizon {
        let i = token.holder(t);
        let j = match scripted {
            None => default_choice(instance, &d, i),
            Some(targets) => {
                let j = targets[t - 1];
                if j > n || !is_legal(instance, &d, i, j, mode) {
                    return Err(DynamicsError::IllegalMove { t, voter: i, target: j, mode });
                }
                j
            }
        };
        let changed = d.get(i) != j;
        d.set(i, j);
        holders.push(i);
        steps.push(Step {
            t,
            voter: i,
            target: j,
            changed,
            digest: d.digest(),
        });

        if changed {
            idle.iter_mut().for_each(|x| *x = false);
            idle_count = 0;
            last_change = t;
        }
        if !std::mem::replace(&mut idle[i], true) {
            idle_count += 1;
        }
        // a script is replayed to its end; only the first event is reported
        let undecided = outcome == Outcome::BudgetExceeded;
        if idle_count == n && undecided {
            outcome = Outcome::Converged {
                state: d.clone(),
                t_star: last_change,
            };
            if scripted.is_none() {
                break;
            }
        }

        let repeat = match scripted {
            None => seen_phase.insert((d.clone(), t % token.period()), t),
            Some(_) => {
                let earlier = seen_state.entry(d.clone()).or_default();
                let found = earlier.iter().rev().copied().find(|&s| covers_all(&holders[s..t], n));
                earlier.push(t);
                found
            }
        };
        if let Some(first) = repeat.filter(|_| undecided) {
            outcome = Outcome::CycleDetected {
                first,
                second: t,
                period: t - first,
            };
            if scripted.is_none() {
                break;
            }
        }
    }
    Ok(DynamicsTrace {
        mode,
        start: start.clone(),
        steps,
        outcome,
    })
}

fn covers_all(holders: &[Voter], n: usize) -> bool {
    let mut seen = vec![false; n + 1];
    let mut count = 0;
    for &v in holders {
        if !std::mem::replace(&mut seen[v], true) {
            count += 1;
        }
    }
    count == n
}

/// Replays an explicit list of `(voter, target)` moves, checking each one.
pub fn replay(
    instance: &Instance,
    start: &DelegationFunction,
    mode: Mode,
    moves: &[(Voter, Voter)],
) -> Result<DynamicsTrace, DynamicsError> {
    let n = instance.n();
    // the script's own voter order, padded so that every voter occurs
    let mut order: Vec<Voter> = moves.iter().map(|&(v, _)| v).collect();
    if let Some(&(v, _)) = moves.iter().find(|&&(v, _)| v == 0 || v > n) {
        return Err(DynamicsError::TokenOutOfRange { entry: v, n });
    }
    order.extend((1..=n).filter(|v| !moves.iter().any(|m| m.0 == *v)));
    let token = TokenFunction::sequence(n, order)?;
    let targets = moves.iter().map(|&(_, j)| j).collect();
    run_dynamics(instance, start, &token, mode, &Policy::Scripted(targets), moves.len())
}

/// Directed graph of states reachable by legal non-trivial moves.
#[derive(Clone, Debug)]
pub struct ImprovementGraph {
    mode: Mode,
    states: Vec<DelegationFunction>,
    index: HashMap<DelegationFunction, usize>,
    // arcs[s] = (voter, target, successor)
    arcs: Vec<Vec<(Voter, Voter, usize)>>,
    // idle[s][i]: voter i has no improving move at state s
    idle: Vec<Vec<bool>>,
    starts: Vec<usize>,
}

impl ImprovementGraph {
    /// Explores every state reachable from `starts` (all states when `None`).
    pub fn explore(
        instance: &Instance,
        starts: Option<&[DelegationFunction]>,
        mode: Mode,
        max_states: usize,
    ) -> Result<Self, DynamicsError> {
        let mut graph = ImprovementGraph {
            mode,
            states: Vec::new(),
            index: HashMap::new(),
            arcs: Vec::new(),
            idle: Vec::new(),
            starts: Vec::new(),
        };
        let initial = match starts {
            Some(list) => {
                for d in list {
                    d.validate(instance.network())?;
                }
                list.to_vec()
            }
            None => all_states(instance, max_states)?,
        };
        let mut queue = VecDeque::new();
        for d in initial {
            let (k, fresh) = graph.intern(d, max_states)?;
            graph.starts.push(k);
            if fresh {
                queue.push_back(k);
            }
        }
        while let Some(s) = queue.pop_front() {
            let d = graph.states[s].clone();
            let mut arcs = Vec::new();
            let mut idle = vec![false; instance.n() + 1];
            for i in instance.voters() {
                let moves = match mode {
                    Mode::Ird => improving_moves(instance, &d, i),
                    Mode::Brd => {
                        let mut best = best_moves(instance, &d, i);
                        best.remove(&d.get(i));
                        best
                    }
                };
                idle[i] = moves.is_empty();
                for j in moves {
                    let (k, fresh) = graph.intern(d.with_choice(i, j), max_states)?;
                    if fresh {
                        queue.push_back(k);
                    }
                    arcs.push((i, j, k));
                }
            }
            graph.arcs[s] = arcs;
            graph.idle[s] = idle;
        }
        Ok(graph)
    }

    fn intern(&mut self, d: DelegationFunction, max_states: usize) -> Result<(usize, bool), DynamicsError> {
        if let Some(&k) = self.index.get(&d) {
            return Ok((k, false));
        }
        if self.states.len() >= max_states {
            return Err(DynamicsError::BudgetExceeded { max_states });
        }
        let k = self.states.len();
        self.index.insert(d.clone(), k);
        self.states.push(d);
        self.arcs.push(Vec::new());
        self.idle.push(Vec::new());
        Ok((k, true))
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[DelegationFunction] {
        &self.states
    }

    pub fn contains(&self, d: &DelegationFunction) -> bool {
        self.index.contains_key(d)
    }

    /// `(voter, target, successor index)` for every legal move at state `s`.
    pub fn arcs(&self, s: usize) -> &[(Voter, Voter, usize)] {
        &self.arcs[s]
    }

    /// States in which nobody can move.
    pub fn fixed_points(&self) -> impl Iterator<Item = &DelegationFunction> + '_ {
        self.states
            .iter()
            .enumerate()
            .filter(|(s, _)| self.arcs[*s].is_empty())
            .map(|(_, d)| d)
    }

    /// Strongly connected components, each listed in ascending state order.
    fn components(&self) -> Vec<Vec<usize>> {
        // iterative Tarjan
        let count = self.states.len();
        let mut index = vec![usize::MAX; count];
        let mut low = vec![0; count];
        let mut on_stack = vec![false; count];
        let mut stack = Vec::new();
        let mut next_index = 0;
        let mut out = Vec::new();
        for root in 0..count {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if let Some(&(_, _, w)) = self.arcs[v].get(*pos) {
                    *pos += 1;
                    if index[w] == usize::MAX {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut component = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            component.push(w);
                            if w == v {
                                break;
                            }
                        }
                        component.sort_unstable();
                        out.push(component);
                    }
                }
            }
        }
        out.sort_unstable_by_key(|c| c[0]);
        out
    }

    /// A component in which the dynamics can stay forever while every voter
    /// keeps receiving the token: it has an internal move, and each voter
    /// either moves inside it or is idle at one of its states.
    fn trapping_component(&self, n: usize) -> Option<Vec<usize>> {
        self.components().into_iter().find(|component| {
            let member: BTreeSet<usize> = component.iter().copied().collect();
            let mut covered = vec![false; n + 1];
            let mut internal = false;
            for &s in component {
                for &(i, _, w) in &self.arcs[s] {
                    if member.contains(&w) {
                        internal = true;
                        covered[i] = true;
                    }
                }
                for (c, &idle) in covered.iter_mut().zip(&self.idle[s]).skip(1) {
                    *c |= idle;
                }
            }
            internal && covered[1..].iter().all(|&c| c)
        })
    }

    /// Shortest walk from `from` to a state satisfying `goal`, staying in `allowed`.
    fn walk_to(&self, from: usize, allowed: &dyn Fn(usize) -> bool, goal: &dyn Fn(usize) -> bool) -> Option<Vec<(Voter, Voter, usize)>> {
        let mut prev: HashMap<usize, (usize, Voter, Voter)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(s) = queue.pop_front() {
            if goal(s) {
                let mut path = Vec::new();
                let mut cur = s;
                while cur != from {
                    let (p, i, j) = prev[&cur];
                    path.push((i, j, cur));
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &(i, j, w) in &self.arcs[s] {
                if allowed(w) && seen.insert(w) {
                    prev.insert(w, (s, i, j));
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

fn all_states(instance: &Instance, max_states: usize) -> Result<Vec<DelegationFunction>, DynamicsError> {
    let options: Vec<Vec<Voter>> = instance
        .voters()
        .map(|i| {
            let mut o = vec![i, ABSTAIN];
            o.extend_from_slice(instance.network().neighbors(i));
            o.sort_unstable();
            o
        })
        .collect();
    let total = options
        .iter()
        .try_fold(1usize, |acc, o| acc.checked_mul(o.len()).filter(|&t| t <= max_states));
    if total.is_none() {
        return Err(DynamicsError::BudgetExceeded { max_states });
    }
    let n = instance.n();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let mut raw = vec![ABSTAIN];
        raw.extend((0..n).map(|k| options[k][idx[k]]));
        out.push(DelegationFunction::from_raw(raw));
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Answer to IR-CONV / BR-CONV.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Convergence {
    ConvergesAlways,
    /// A run that never converges: a prefix followed by a closed walk that
    /// gives the token to every voter, ending in a detected cycle.
    Diverges(DynamicsTrace),
}

/// Does every run converge, whatever the token function? Starts from `start`,
/// or from every state when `None`.
pub fn decide_conv(
    instance: &Instance,
    start: Option<&DelegationFunction>,
    mode: Mode,
    max_states: usize,
) -> Result<Convergence, DynamicsError> {
    let starts = start.map(std::slice::from_ref);
    let graph = ImprovementGraph::explore(instance, starts, mode, max_states)?;
    let n = instance.n();
    let Some(component) = graph.trapping_component(n) else {
        return Ok(Convergence::ConvergesAlways);
    };
    let member: BTreeSet<usize> = component.iter().copied().collect();
    let in_component = |s: usize| member.contains(&s);

    let (origin, prefix) = graph
        .starts
        .iter()
        .find_map(|&s0| graph.walk_to(s0, &|_| true, &in_component).map(|p| (s0, p)))
        .expect("every explored state is reachable from a start");
    let entry = prefix.last().map_or(origin, |&(_, _, w)| w);

    let mut script: Vec<(Voter, Voter)> = prefix.iter().map(|&(i, j, _)| (i, j)).collect();
    let mut cur = entry;
    for v in 1..=n {
        let moves_inside = |s: usize| graph.arcs[s].iter().any(|&(i, _, w)| i == v && in_component(w));
        if component.iter().any(|&s| moves_inside(s)) {
            let path = graph.walk_to(cur, &in_component, &moves_inside).expect("strongly connected");
            script.extend(path.iter().map(|&(i, j, _)| (i, j)));
            cur = path.last().map_or(cur, |&(_, _, w)| w);
            let &(i, j, w) = graph.arcs[cur].iter().find(|&&(i, _, w)| i == v && in_component(w)).expect("arc exists");
            script.push((i, j));
            cur = w;
        } else {
            let path = graph
                .walk_to(cur, &in_component, &|s| graph.idle[s][v])
                .expect("strongly connected");
            script.extend(path.iter().map(|&(i, j, _)| (i, j)));
            cur = path.last().map_or(cur, |&(_, _, w)| w);
            script.push((v, graph.states[cur].get(v)));
        }
    }
    let back = graph.walk_to(cur, &in_component, &|s| s == entry).expect("strongly connected");
    script.extend(back.iter().map(|&(i, j, _)| (i, j)));

    let trace = replay(instance, &graph.states[origin], mode, &script)?;
    debug_assert!(matches!(trace.outcome, Outcome::CycleDetected { .. }));
    Ok(Convergence::Diverges(trace))
}

/// IR-CONV.
pub fn decide_ir_conv(instance: &Instance, start: Option<&DelegationFunction>, max_states: usize) -> Result<Convergence, DynamicsError> {
    decide_conv(instance, start, Mode::Ird, max_states)
}

/// BR-CONV.
pub fn decide_br_conv(instance: &Instance, start: Option<&DelegationFunction>, max_states: usize) -> Result<Convergence, DynamicsError> {
    decide_conv(instance, start, Mode::Brd, max_states)
}

/// Equilibria reachable from `start` by some run.
pub fn reachable_equilibria(
    instance: &Instance,
    start: &DelegationFunction,
    mode: Mode,
    max_states: usize,
) -> Result<Vec<DelegationFunction>, DynamicsError> {
    let graph = ImprovementGraph::explore(instance, Some(std::slice::from_ref(start)), mode, max_states)?;
    Ok(graph
        .states()
        .iter()
        .filter(|d| is_equilibrium(instance, d))
        .cloned()
        .collect())
}

/// Token order for complete networks that leads BRD from all-vote to the
/// guru set of `target`: non-gurus first, gurus last, each in ascending order.
pub fn converging_permutation(instance: &Instance, target: &DelegationFunction) -> Result<Vec<Voter>, DynamicsError> {
    if !instance.network().is_complete() {
        return Err(DynamicsError::NotComplete);
    }
    target.validate(instance.network())?;
    if !is_equilibrium(instance, target) {
        return Err(DynamicsError::NotAnEquilibrium);
    }
    let gurus = resolve_gurus(target).gurus().clone();
    Ok(instance
        .voters()
        .filter(|v| !gurus.contains(v))
        .chain(gurus.iter().copied())
        .collect())
}
