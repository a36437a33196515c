//! Instance builders for the hardness gadgets and for profiles without
//! equilibria.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::model::{DelegationFunction, Instance, PreferenceProfile, SocialNetwork, Voter, ABSTAIN};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("literal {literal} refers to a variable outside 1..={vars}")]
    LiteralOutOfRange { literal: i64, vars: usize },
    #[error("clause {clause} has {len} literals, at most 3 are allowed")]
    ClauseTooLong { clause: usize, len: usize },
    #[error("variable {var} occurs {count} times, at most 4 are allowed")]
    TooManyOccurrences { var: usize, count: usize },
    #[error("vertex {0} has an empty colour list")]
    EmptyColorList(Voter),
    #[error("vertex {vertex} lists colour {color} twice")]
    DuplicateColor { vertex: Voter, color: u32 },
    #[error("{lists} colour lists for a graph on {vertices} vertices")]
    SizeMismatch { lists: usize, vertices: usize },
    #[error("cycle must have at least 3 voters")]
    CycleTooShort,
    #[error("the given sequence is not a cycle of the network: {0}")]
    NotACycle(String),
    #[error("the cycle has a chord {0}-{1}")]
    Chord(Voter, Voter),
    #[error("assignment has {found} values for {expected} variables")]
    WrongAssignment { expected: usize, found: usize },
    #[error("invalid colouring: {0}")]
    InvalidColoring(String),
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}

/// A CNF formula over variables `1..=vars`; literals are signed as in DIMACS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    vars: usize,
    clauses: Vec<Vec<i64>>,
}

impl CnfFormula {
    /// Checks the 3-SAT-4 shape. Repeated literals inside a clause are merged.
    pub fn new(vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self, ReductionError> {
        let mut count = vec![0usize; vars + 1];
        let mut merged = Vec::with_capacity(clauses.len());
        for (c, clause) in clauses.into_iter().enumerate() {
            let mut seen = BTreeSet::new();
            let mut lits = Vec::new();
            for lit in clause {
                let var = lit.unsigned_abs() as usize;
                if lit == 0 || var > vars {
                    return Err(ReductionError::LiteralOutOfRange { literal: lit, vars });
                }
                if seen.insert(lit) {
                    lits.push(lit);
                    count[var] += 1;
                }
            }
            if lits.len() > 3 {
                return Err(ReductionError::ClauseTooLong {
                    clause: c + 1,
                    len: lits.len(),
                });
            }
            merged.push(lits);
        }
        if let Some(var) = (1..=vars).find(|&v| count[v] > 4) {
            return Err(ReductionError::TooManyOccurrences { var, count: count[var] });
        }
        Ok(CnfFormula { vars, clauses: merged })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[Vec<i64>] {
        &self.clauses
    }

    /// `assignment[k]` is the value of variable `k + 1`.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|&lit| assignment[lit.unsigned_abs() as usize - 1] == (lit > 0))
        })
    }

    /// Parses DIMACS CNF: `c` comments, a `p cnf <vars> <clauses>` header and
    /// clauses terminated by `0`, possibly spanning lines.
    pub fn parse_dimacs(text: &str) -> Result<Self, ReductionError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        let err = |line: usize, message: String| ReductionError::Parse { line, message };
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
                continue;
            }
            if trimmed.starts_with('p') {
                let fields: Vec<&str> = trimmed.split_whitespace().collect();
                if header.is_some() {
                    return Err(err(line, "second header".into()));
                }
                match fields.as_slice() {
                    ["p", "cnf", v, c] => {
                        let v = v.parse().map_err(|_| err(line, format!("bad variable count {v:?}")))?;
                        let c = c.parse().map_err(|_| err(line, format!("bad clause count {c:?}")))?;
                        header = Some((v, c));
                    }
                    _ => return Err(err(line, "expected `p cnf <vars> <clauses>`".into())),
                }
                continue;
            }
            if header.is_none() {
                return Err(err(line, "clause before the `p cnf` header".into()));
            }
            for token in trimmed.split_whitespace() {
                let lit: i64 = token.parse().map_err(|_| err(line, format!("bad literal {token:?}")))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(lit);
                }
            }
        }
        let (vars, count) = header.ok_or_else(|| err(0, "missing `p cnf` header".into()))?;
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != count {
            return Err(err(0, format!("header announces {count} clauses, found {}", clauses.len())));
        }
        CnfFormula::new(vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&format!("{lit} "));
            }
            out.push_str("0\n");
        }
        out
    }
}

/// The equilibrium instance built from a formula, with its voter layout:
/// `v_i^t = 2i-1`, `v_i^f = 2i`, then three voters per clause.
#[derive(Clone, Debug)]
pub struct Sat4Reduction {
    pub instance: Instance,
    formula: CnfFormula,
}

impl Sat4Reduction {
    pub fn literal_voter(&self, lit: i64) -> Voter {
        literal_voter(lit)
    }

    /// `v_{jk}^c` for clause `j ≥ 1` and `k ∈ {1, 2, 3}`.
    pub fn clause_voter(&self, j: usize, k: usize) -> Voter {
        clause_voter(self.formula.vars, j, k)
    }

    /// Literal voters vote when their literal is true; clause voters funnel
    /// to their favourite true literal.
    pub fn equilibrium_from_assignment(&self, assignment: &[bool]) -> Result<DelegationFunction, ReductionError> {
        let f = &self.formula;
        if assignment.len() != f.vars {
            return Err(ReductionError::WrongAssignment {
                expected: f.vars,
                found: assignment.len(),
            });
        }
        let mut choices = vec![ABSTAIN; self.instance.n()];
        for (k, &value) in assignment.iter().enumerate() {
            let (t, fv) = (2 * k + 1, 2 * k + 2);
            choices[t - 1] = if value { t } else { fv };
            choices[fv - 1] = if value { t } else { fv };
        }
        for j in 1..=f.clauses.len() {
            let v1 = self.clause_voter(j, 1);
            let favourite = self
                .instance
                .profile()
                .acceptable(v1)
                .iter()
                .copied()
                .find(|&g| g <= 2 * f.vars && choices[g - 1] == g)
                .unwrap_or(self.clause_voter(j, 2));
            choices[v1 - 1] = favourite;
            choices[self.clause_voter(j, 2) - 1] = v1;
            choices[self.clause_voter(j, 3) - 1] = v1;
        }
        Ok(DelegationFunction::new(self.instance.network(), choices)?)
    }

    /// `x_i` is true when `v_i^t` votes.
    pub fn assignment_from_equilibrium(&self, d: &DelegationFunction) -> Vec<bool> {
        (1..=self.formula.vars).map(|i| d.get(2 * i - 1) == 2 * i - 1).collect()
    }
}

fn literal_voter(lit: i64) -> Voter {
    let var = lit.unsigned_abs() as usize;
    if lit > 0 { 2 * var - 1 } else { 2 * var }
}

fn clause_voter(vars: usize, j: usize, k: usize) -> Voter {
    2 * vars + 3 * (j - 1) + k
}

/// Builds the bounded-degree instance whose equilibria encode satisfying
/// assignments. Clause voter 1 is joined to the clause's literal voters and
/// prefers them, in clause order, to its successor in the clause triangle.
pub fn from_3sat4(f: &CnfFormula) -> Result<Sat4Reduction, ReductionError> {
    let n = 2 * f.vars + 3 * f.clauses.len();
    let mut edges = Vec::new();
    let mut lists: Vec<Vec<Voter>> = vec![Vec::new(); n + 1];
    for i in 1..=f.vars {
        let (t, fv) = (2 * i - 1, 2 * i);
        edges.push((t, fv));
        lists[t] = vec![fv];
        lists[fv] = vec![t];
    }
    for (c, clause) in f.clauses.iter().enumerate() {
        let j = c + 1;
        let v = |k| clause_voter(f.vars, j, k);
        edges.extend([(v(1), v(2)), (v(2), v(3)), (v(1), v(3))]);
        let lits: Vec<Voter> = clause.iter().map(|&lit| literal_voter(lit)).collect();
        for &l in &lits {
            edges.push((l, v(1)));
        }
        let mut sorted = lits.clone();
        sorted.sort_unstable();
        lists[v(1)] = lits.iter().copied().chain([v(2)]).collect();
        lists[v(2)] = sorted.iter().copied().chain([v(3)]).collect();
        lists[v(3)] = sorted.iter().copied().chain([v(1)]).collect();
    }
    let network = SocialNetwork::new(n, edges)?;
    let profile = PreferenceProfile::from_lists(lists.into_iter().skip(1).map(|acc| (false, acc)))?;
    let instance = Instance::new(network, profile)?;
    assert!(instance.network().max_degree() <= 5, "3-SAT-4 gadgets have degree at most 5");
    assert!(instance.maxa() <= 4, "3-SAT-4 gadgets accept at most 4 gurus");
    Ok(Sat4Reduction {
        instance,
        formula: f.clone(),
    })
}

/// A graph with a list of allowed colours per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListColoringInstance {
    graph: SocialNetwork,
    lists: Vec<Vec<u32>>,
}

impl ListColoringInstance {
    /// `lists[k]` is the list of vertex `k + 1`; lists are sorted.
    pub fn new(graph: SocialNetwork, lists: Vec<Vec<u32>>) -> Result<Self, ReductionError> {
        if lists.len() != graph.n() {
            return Err(ReductionError::SizeMismatch {
                lists: lists.len(),
                vertices: graph.n(),
            });
        }
        let mut sorted = Vec::with_capacity(lists.len());
        for (k, mut list) in lists.into_iter().enumerate() {
            if list.is_empty() {
                return Err(ReductionError::EmptyColorList(k + 1));
            }
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(ReductionError::DuplicateColor {
                    vertex: k + 1,
                    color: w[0],
                });
            }
            sorted.push(list);
        }
        Ok(ListColoringInstance { graph, lists: sorted })
    }

    pub fn graph(&self) -> &SocialNetwork {
        &self.graph
    }

    pub fn list(&self, v: Voter) -> &[u32] {
        &self.lists[v - 1]
    }

    /// `colors[k]` colours vertex `k + 1`.
    pub fn is_proper(&self, colors: &[u32]) -> bool {
        colors.len() == self.graph.n()
            && colors.iter().enumerate().all(|(k, c)| self.lists[k].contains(c))
            && self.graph.edges().all(|(u, v)| colors[u - 1] != colors[v - 1])
    }

    /// Parses `vertex <v> : <colours…>` and `edge <u> <v>` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let mut lists: BTreeMap<Voter, Vec<u32>> = BTreeMap::new();
        let mut edges = Vec::new();
        let err = |line: usize, message: String| ReductionError::Parse { line, message };
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut words = content.split_whitespace();
            match words.next() {
                Some("vertex") => {
                    let rest: Vec<&str> = words.collect();
                    let (head, colors) = match rest.iter().position(|&w| w == ":") {
                        Some(p) => (&rest[..p], &rest[p + 1..]),
                        None => return Err(err(line, "expected `vertex <v> : <colours>`".into())),
                    };
                    let [v] = head else {
                        return Err(err(line, "expected a single vertex id".into()));
                    };
                    let v: Voter = v.parse().map_err(|_| err(line, format!("bad vertex {v:?}")))?;
                    let colors = colors
                        .iter()
                        .map(|c| c.parse::<u32>().map_err(|_| err(line, format!("bad colour {c:?}"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    if v == 0 || lists.insert(v, colors).is_some() {
                        return Err(err(line, format!("vertex {v} is invalid or listed twice")));
                    }
                }
                Some("edge") => {
                    let ends: Vec<&str> = words.collect();
                    let [u, v] = ends.as_slice() else {
                        return Err(err(line, "expected `edge <u> <v>`".into()));
                    };
                    let u: Voter = u.parse().map_err(|_| err(line, format!("bad vertex {u:?}")))?;
                    let v: Voter = v.parse().map_err(|_| err(line, format!("bad vertex {v:?}")))?;
                    edges.push((u, v));
                }
                Some(other) => return Err(err(line, format!("unknown directive {other:?}"))),
                None => {}
            }
        }
        let n = lists.len();
        if let Some((k, _)) = lists.keys().enumerate().find(|&(k, &v)| v != k + 1) {
            return Err(err(0, format!("vertex {} has no `vertex` line", k + 1)));
        }
        let graph = SocialNetwork::new(n, edges)?;
        ListColoringInstance::new(graph, lists.into_values().collect())
    }
}

/// The instance built from a list-colouring problem, with its voter layout.
#[derive(Clone, Debug)]
pub struct ListColoringReduction {
    pub instance: Instance,
    source: ListColoringInstance,
    // voter c^i_u per (u, colour)
    pendant: BTreeMap<(Voter, u32), Voter>,
    // (u, v, colour) -> (d1, d2, d3), d1 next to u
    triangles: Vec<(Voter, Voter, u32, [Voter; 3])>,
}

impl ListColoringReduction {
    pub fn pendant(&self, u: Voter, color: u32) -> Option<Voter> {
        self.pendant.get(&(u, color)).copied()
    }

    /// Gadgets `(u, v, colour, [d1, d2, d3])`.
    pub fn triangles(&self) -> &[(Voter, Voter, u32, [Voter; 3])] {
        &self.triangles
    }

    /// The equilibrium that a proper colouring induces.
    pub fn equilibrium_from_coloring(&self, colors: &[u32]) -> Result<DelegationFunction, ReductionError> {
        if !self.source.is_proper(colors) {
            return Err(ReductionError::InvalidColoring(format!("{colors:?}")));
        }
        let mut choices = vec![ABSTAIN; self.instance.n()];
        let mut set = |v: Voter, j: Voter| choices[v - 1] = j;
        for (&(u, c), &p) in &self.pendant {
            if colors[u - 1] == c {
                set(u, p);
                set(p, p);
            } else {
                set(p, u);
            }
        }
        for &(u, v, c, [d1, d2, d3]) in &self.triangles {
            if colors[u - 1] == c {
                set(d1, d1);
                set(d3, d1);
                set(d2, v);
            } else if colors[v - 1] == c {
                set(d1, u);
                set(d3, d3);
                set(d2, d3);
            } else {
                set(d1, u);
                set(d2, v);
                set(d3, d3);
            }
        }
        Ok(DelegationFunction::new(self.instance.network(), choices)?)
    }

    /// Each vertex takes the colour of the pendant voter that votes.
    pub fn coloring_from_equilibrium(&self, d: &DelegationFunction) -> Option<Vec<u32>> {
        (1..=self.source.graph.n())
            .map(|u| {
                self.source
                    .list(u)
                    .iter()
                    .copied()
                    .find(|&c| self.pendant(u, c).is_some_and(|p| d.get(p) == p))
            })
            .collect()
    }
}

/// Builds the instance whose equilibria encode proper list colourings.
/// Voters: base vertices, then pendant colour voters, then one triangle
/// per edge and shared colour.
pub fn from_list_coloring(lc: &ListColoringInstance) -> Result<ListColoringReduction, ReductionError> {
    let base = lc.graph.n();
    let mut next = base;
    let mut pendant = BTreeMap::new();
    let mut edges: Vec<(Voter, Voter)> = Vec::new();
    for u in 1..=base {
        for &c in lc.list(u) {
            next += 1;
            pendant.insert((u, c), next);
            edges.push((u, next));
        }
    }
    let mut triangles = Vec::new();
    for (u, v) in lc.graph.edges() {
        for &c in lc.list(u).iter().filter(|c| lc.list(v).contains(c)) {
            let ds = [next + 1, next + 2, next + 3];
            next += 3;
            edges.extend([(ds[0], ds[1]), (ds[1], ds[2]), (ds[0], ds[2]), (ds[0], u), (ds[1], v)]);
            triangles.push((u, v, c, ds));
        }
    }
    let n = next;
    let mut lists: Vec<Vec<Voter>> = vec![Vec::new(); n + 1];
    let others = |u: Voter, c: u32| -> Vec<Voter> {
        lc.list(u).iter().filter(|&&x| x != c).map(|&x| pendant[&(u, x)]).collect()
    };
    for u in 1..=base {
        lists[u] = lc.list(u).iter().map(|&c| pendant[&(u, c)]).collect();
        for &c in lc.list(u) {
            lists[pendant[&(u, c)]] = others(u, c);
        }
    }
    for &(u, v, c, [d1, d2, d3]) in &triangles {
        lists[d1] = others(u, c).into_iter().chain([d2]).collect();
        lists[d2] = others(v, c).into_iter().chain([d3]).collect();
        lists[d3] = vec![d1];
    }
    let network = SocialNetwork::new(n, edges)?;
    let profile = PreferenceProfile::from_lists(lists.into_iter().skip(1).map(|acc| (false, acc)))?;
    Ok(ListColoringReduction {
        instance: Instance::new(network, profile)?,
        source: lc.clone(),
        pendant,
        triangles,
    })
}

/// Preferences with no equilibrium on any network containing the chordless
/// cycle `cycle = (i_1, …, i_k)`: `i_j` ranks `i_{j+1}, i_{j+2}, …, i_{j-2}`
/// above voting and rejects `i_{j-1}`; everybody else just votes.
pub fn no_equilibrium_profile(network: &SocialNetwork, cycle: &[Voter]) -> Result<PreferenceProfile, ReductionError> {
    check_chordless_cycle(network, cycle)?;
    let k = cycle.len();
    let mut profile = PreferenceProfile::new(network.n());
    for j in 0..k {
        let acc = (1..k - 1).map(|s| cycle[(j + s) % k]).collect();
        profile.set_reduced(cycle[j], false, acc)?;
    }
    Ok(profile)
}

fn check_chordless_cycle(network: &SocialNetwork, cycle: &[Voter]) -> Result<(), ReductionError> {
    let k = cycle.len();
    if k < 3 {
        return Err(ReductionError::CycleTooShort);
    }
    let n = network.n();
    let mut position = BTreeMap::new();
    for (p, &v) in cycle.iter().enumerate() {
        if v == 0 || v > n {
            return Err(ReductionError::NotACycle(format!("voter {v} out of range")));
        }
        if position.insert(v, p).is_some() {
            return Err(ReductionError::NotACycle(format!("voter {v} repeated")));
        }
    }
    for p in 0..k {
        let (a, b) = (cycle[p], cycle[(p + 1) % k]);
        if !network.has_edge(a, b) {
            return Err(ReductionError::NotACycle(format!("missing edge {a}-{b}")));
        }
    }
    for p in 0..k {
        for q in p + 2..k {
            if (p, q) != (0, k - 1) && network.has_edge(cycle[p], cycle[q]) {
                return Err(ReductionError::Chord(cycle[p], cycle[q]));
            }
        }
    }
    Ok(())
}

/// A shortest cycle of the network (hence chordless), or `None` for a forest.
pub fn find_chordless_cycle(network: &SocialNetwork) -> Option<Vec<Voter>> {
    let n = network.n();
    // (length, root, u, w): the cycle root..u, w..root closed by edge u-w
    let mut best: Option<(usize, Voter, Voter, Voter)> = None;
    for root in 1..=n {
        let (dist, parent) = bfs(network, root);
        for u in network.voters().filter(|&u| dist[u] != usize::MAX) {
            for &w in network.neighbors(u) {
                // every non-tree edge closes a walk through the root; the
                // globally shortest such walk is a simple cycle
                if u < w && parent[u] != Some(w) && parent[w] != Some(u) {
                    let len = dist[u] + dist[w] + 1;
                    if best.is_none_or(|b| len < b.0) {
                        best = Some((len, root, u, w));
                    }
                }
            }
        }
    }
    let (_, root, u, w) = best?;
    let (_, parent) = bfs(network, root);
    let climb = |mut v: Voter| {
        let mut path = vec![v];
        while let Some(p) = parent[v] {
            path.push(p);
            v = p;
        }
        path
    };
    let mut cycle = climb(u);
    cycle.reverse();
    let mut down = climb(w);
    down.pop();
    cycle.extend(down);
    debug_assert!(check_chordless_cycle(network, &cycle).is_ok());
    Some(cycle)
}

fn bfs(network: &SocialNetwork, root: Voter) -> (Vec<usize>, Vec<Option<Voter>>) {
    let n = network.n();
    let mut dist = vec![usize::MAX; n + 1];
    let mut parent = vec![None; n + 1];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in network.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                parent[w] = Some(v);
                queue.push_back(w);
            }
        }
    }
    (dist, parent)
}
