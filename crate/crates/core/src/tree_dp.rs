//! Polynomial algorithms when the social network is a tree.
//!
//! Everything here works on a [`RootedTree`]. For every voter `r` and
//! candidate guru `g` of `r`, the table entry `V(r, g)` is the best cost of a
//! local equilibrium on the subtree of `r` in which `r` ends up with guru
//! `g`. Children are independent once the label of their parent is fixed.
//! A forest is handled by rooting each component separately.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::exact::{Decision, Objective};
use crate::model::{guru_is_admissible, DelegationFunction, Instance, PreferenceProfile, SocialNetwork, Voter, ABSTAIN};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("the social network is not a forest")]
    NotAForest,
    #[error("the social network is not a star")]
    NotAStar,
    #[error("voter {voter} is outside 1..={n}")]
    NoSuchVoter { voter: Voter, n: usize },
    #[error("voter {0} is an abstainer and cannot be a guru")]
    AbstainerQuery(Voter),
    #[error("rooted tree has {tree} voters but the instance has {instance}")]
    SizeMismatch { tree: usize, instance: usize },
    #[error("delegation is not defined exactly on the subtree of {root}: {reason}")]
    IllScoped { root: Voter, reason: String },
    #[error("cost of voter {voter} for guru {guru} is not finite")]
    NonFiniteCost { voter: Voter, guru: Voter },
}

/// A forest with a chosen root per component, children in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    roots: Vec<Voter>,
    parent: Vec<Option<Voter>>,
    children: Vec<Vec<Voter>>,
    // preorder over all components; the subtree of r is pre[tin[r]..tin[r] + size[r]]
    pre: Vec<Voter>,
    tin: Vec<usize>,
    size: Vec<usize>,
}

impl RootedTree {
    /// Roots the component of `root` at `root` and every other component at
    /// its smallest voter.
    pub fn new(network: &SocialNetwork, root: Voter) -> Result<Self, TreeError> {
        let n = network.n();
        if root == 0 || root > n {
            return Err(TreeError::NoSuchVoter { voter: root, n });
        }
        if !network.is_forest() {
            return Err(TreeError::NotAForest);
        }
        let mut parent = vec![None; n + 1];
        let mut children = vec![Vec::new(); n + 1];
        let mut seen = vec![false; n + 1];
        let mut roots = Vec::new();
        for start in std::iter::once(root).chain(1..=n) {
            if seen[start] {
                continue;
            }
            roots.push(start);
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in network.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some(v);
                        children[v].push(w);
                        queue.push_back(w);
                    }
                }
            }
        }

        let mut pre = Vec::with_capacity(n);
        let mut tin = vec![0; n + 1];
        let mut size = vec![1; n + 1];
        for &r in &roots {
            let mut stack = vec![r];
            while let Some(v) = stack.pop() {
                tin[v] = pre.len();
                pre.push(v);
                stack.extend(children[v].iter().rev());
            }
        }
        for &v in pre.iter().rev() {
            if let Some(p) = parent[v] {
                size[p] += size[v];
            }
        }
        Ok(RootedTree {
            roots,
            parent,
            children,
            pre,
            tin,
            size,
        })
    }

    pub fn n(&self) -> usize {
        self.pre.len()
    }

    /// r₀, the root chosen at construction.
    pub fn root(&self) -> Voter {
        self.roots[0]
    }

    /// One root per component, `root()` first.
    pub fn roots(&self) -> &[Voter] {
        &self.roots
    }

    pub fn parent(&self, i: Voter) -> Option<Voter> {
        self.parent[i]
    }

    pub fn children(&self, i: Voter) -> &[Voter] {
        &self.children[i]
    }

    /// `x ∈ T_r`. Abstention is never in a subtree.
    pub fn contains(&self, r: Voter, x: Voter) -> bool {
        x != ABSTAIN && x <= self.n() && self.tin[r] <= self.tin[x] && self.tin[x] < self.tin[r] + self.size[r]
    }

    /// Voters of `T_r` in preorder.
    pub fn subtree(&self, r: Voter) -> &[Voter] {
        &self.pre[self.tin[r]..self.tin[r] + self.size[r]]
    }

    /// Child of `r` whose subtree holds `x`.
    pub fn child_towards(&self, r: Voter, x: Voter) -> Option<Voter> {
        self.children[r].iter().copied().find(|&u| self.contains(u, x))
    }

    /// Every voter after all of its descendants.
    fn post_order(&self) -> impl Iterator<Item = Voter> + '_ {
        self.pre.iter().rev().copied()
    }
}

/// Label order used for every tie-break: ascending ids, abstention last.
fn label_key(g: Voter) -> (bool, Voter) {
    (g == ABSTAIN, g)
}

fn sort_labels(labels: &mut [Voter]) {
    labels.sort_unstable_by_key(|&g| label_key(g));
}

/// Labels of `r` that satisfy condition (b): Acc(r) plus voting or
/// abstaining, whichever `r` prefers. A root has no parent, so its label
/// must lie in its own subtree.
fn candidate_labels(profile: &PreferenceProfile, tree: &RootedTree, r: Voter) -> Vec<Voter> {
    let mut labels: Vec<Voter> = profile
        .acceptable(r)
        .iter()
        .copied()
        .filter(|&g| tree.parent(r).is_some() || tree.contains(r, g))
        .collect();
    labels.push(if profile.is_abstainer(r) { ABSTAIN } else { r });
    sort_labels(&mut labels);
    labels
}

/// Whether `g_u` may label child `u` when its parent `r` has label `g_r`.
fn in_label_set(profile: &PreferenceProfile, tree: &RootedTree, r: Voter, u: Voter, g_r: Voter, g_u: Voter) -> bool {
    if g_u == g_r {
        return true;
    }
    !tree.contains(u, g_r)
        && (g_u == ABSTAIN || tree.contains(u, g_u))
        && profile.prefers(r, g_r, g_u)
        && profile.prefers(u, g_u, g_r)
}

/// `Label_u(g_r)` for a child `u`, as a syntactic filter over
/// `T_u ∪ {0} ∪ {g_r}`, in label order.
pub fn label_set(instance: &Instance, tree: &RootedTree, u: Voter, g_r: Voter) -> Vec<Voter> {
    let r = tree.parent(u).expect("label sets are defined for children only");
    let profile = instance.profile();
    let mut out: Vec<Voter> = tree
        .subtree(u)
        .iter()
        .copied()
        .chain([ABSTAIN, g_r])
        .filter(|&g| in_label_set(profile, tree, r, u, g_r, g))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    sort_labels(&mut out);
    out
}

fn check_scope(instance: &Instance, tree: &RootedTree, d: &BTreeMap<Voter, Voter>, r: Voter, label: Voter) -> Result<(), TreeError> {
    let n = instance.n();
    if tree.n() != n {
        return Err(TreeError::SizeMismatch { tree: tree.n(), instance: n });
    }
    if r == 0 || r > n {
        return Err(TreeError::NoSuchVoter { voter: r, n });
    }
    if label > n {
        return Err(TreeError::NoSuchVoter { voter: label, n });
    }
    let ill = |reason: String| Err(TreeError::IllScoped { root: r, reason });
    let subtree = tree.subtree(r);
    if d.len() != subtree.len() {
        return ill(format!("{} entries for a subtree of {} voters", d.len(), subtree.len()));
    }
    for &i in subtree {
        let Some(&j) = d.get(&i) else {
            return ill(format!("voter {i} has no delegation"));
        };
        if j != i && j != ABSTAIN && !instance.network().has_edge(i, j) {
            return ill(format!("voter {i} delegates to non-neighbour {j}"));
        }
    }
    Ok(())
}

/// Gurus inside `T_r` when the guru of `r` is taken to be `label`.
fn local_gurus(tree: &RootedTree, d: &BTreeMap<Voter, Voter>, r: Voter, label: Voter) -> BTreeMap<Voter, Voter> {
    let subtree = tree.subtree(r);
    subtree
        .iter()
        .map(|&j| {
            let mut cur = j;
            let mut guru = ABSTAIN;
            for _ in 0..=subtree.len() {
                if cur == r {
                    guru = label;
                    break;
                }
                let next = d[&cur];
                if next == cur || next == ABSTAIN {
                    guru = next;
                    break;
                }
                cur = next;
            }
            (j, guru)
        })
        .collect()
}

/// Local equilibrium on `T_r` with label `label`, checked through the
/// definition: consistency of the label (i), stability inside the subtree
/// (ii) and relaxed stability of `r` (iii).
pub fn check_local_equilibrium(
    instance: &Instance,
    tree: &RootedTree,
    d: &BTreeMap<Voter, Voter>,
    r: Voter,
    label: Voter,
) -> Result<bool, TreeError> {
    check_scope(instance, tree, d, r, label)?;
    let profile = instance.profile();

    let consistent = if label == ABSTAIN {
        d[&r] == ABSTAIN
    } else if !tree.contains(r, label) {
        tree.parent(r).is_some_and(|p| d[&r] == p)
    } else {
        let mut cur = r;
        let mut reached = false;
        for _ in 0..tree.subtree(r).len() {
            let next = d[&cur];
            if next == cur {
                reached = cur == label;
                break;
            }
            if next == ABSTAIN || !tree.contains(r, next) {
                break;
            }
            cur = next;
        }
        reached
    };
    if !consistent {
        return Ok(false);
    }

    let gu = local_gurus(tree, d, r, label);
    let beats_all = |i: Voter, others: &[Voter]| {
        let g = gu[&i];
        others
            .iter()
            .map(|j| gu[j])
            .chain([ABSTAIN, i])
            .all(|h| h == g || profile.prefers(i, g, h))
    };
    for &i in &tree.subtree(r)[1..] {
        if !beats_all(i, instance.network().neighbors(i)) {
            return Ok(false);
        }
    }
    Ok(beats_all(r, tree.children(r)))
}

/// The same predicate through the recursive characterization: (a) the
/// delegation of `r` matches the label, (b) the label beats voting and
/// abstaining, (c) every child is a local equilibrium compatible with it.
pub fn check_local_equilibrium_abc(
    instance: &Instance,
    tree: &RootedTree,
    d: &BTreeMap<Voter, Voter>,
    r: Voter,
    label: Voter,
) -> Result<bool, TreeError> {
    check_scope(instance, tree, d, r, label)?;
    let mut memo = BTreeMap::new();
    Ok(abc(instance.profile(), tree, d, r, label, &mut memo))
}

fn abc(
    profile: &PreferenceProfile,
    tree: &RootedTree,
    d: &BTreeMap<Voter, Voter>,
    r: Voter,
    g: Voter,
    memo: &mut BTreeMap<(Voter, Voter), bool>,
) -> bool {
    if let Some(&known) = memo.get(&(r, g)) {
        return known;
    }
    let a = if g == r {
        d[&r] == r
    } else if g == ABSTAIN {
        d[&r] == ABSTAIN
    } else if let Some(u) = tree.child_towards(r, g) {
        d[&r] == u
    } else {
        tree.parent(r).is_some_and(|p| d[&r] == p)
    };
    let b = [ABSTAIN, r].into_iter().all(|x| x == g || profile.prefers(r, g, x));
    let result = a
        && b
        && tree.children(r).iter().all(|&u| {
            abc(profile, tree, d, u, g, memo)
                || (!tree.contains(u, g)
                    && downward_guru(tree, d, u).is_some_and(|g_u| {
                        profile.prefers(r, g, g_u) && profile.prefers(u, g_u, g) && abc(profile, tree, d, u, g_u, memo)
                    }))
        });
    memo.insert((r, g), result);
    result
}

/// Where the delegations of `u` end when they only go down: the only label
/// in `T_u ∪ {0}` that condition (a) can accept.
fn downward_guru(tree: &RootedTree, d: &BTreeMap<Voter, Voter>, u: Voter) -> Option<Voter> {
    let mut cur = u;
    loop {
        let next = d[&cur];
        if next == cur || next == ABSTAIN {
            return Some(next);
        }
        if tree.parent(next) != Some(cur) {
            return None;
        }
        cur = next;
    }
}

/// Per-voter cost Φᵢ(g) of having guru `g`.
pub trait Phi {
    fn cost(&self, i: Voter, g: Voter) -> f64;
}

impl<F: Fn(Voter, Voter) -> f64> Phi for F {
    fn cost(&self, i: Voter, g: Voter) -> f64 {
        self(i, g)
    }
}

/// Φ ≡ 0: any equilibrium is optimal.
pub struct ZeroPhi;

impl Phi for ZeroPhi {
    fn cost(&self, _: Voter, _: Voter) -> f64 {
        0.0
    }
}

/// Counts abstaining voters.
pub struct AbstentionPhi;

impl Phi for AbstentionPhi {
    fn cost(&self, _: Voter, g: Voter) -> f64 {
        if g == ABSTAIN { 1.0 } else { 0.0 }
    }
}

/// Rank of the guru minus one.
pub struct DissatisfactionPhi<'a>(pub &'a PreferenceProfile);

impl Phi for DissatisfactionPhi<'_> {
    fn cost(&self, i: Voter, g: Voter) -> f64 {
        (self.0.rank(i, g) - 1) as f64
    }
}

/// −1 when `voter` is its own guru, 0 otherwise.
pub struct MembershipPhi(pub Voter);

impl Phi for MembershipPhi {
    fn cost(&self, i: Voter, g: Voter) -> f64 {
        if i == self.0 && g == self.0 { -1.0 } else { 0.0 }
    }
}

/// All entries `V(r, g)` with the label chosen for every child.
#[derive(Clone, Debug, PartialEq)]
pub struct DpTable {
    labels: Vec<Vec<Voter>>,
    values: Vec<Vec<f64>>,
    // per voter and label: the label picked for each child, in child order
    picks: Vec<Vec<Vec<Voter>>>,
}

impl DpTable {
    fn build<O, C>(instance: &Instance, tree: &RootedTree, own: O, contribution: C) -> Result<Self, TreeError>
    where
        O: Fn(Voter, Voter) -> f64,
        C: Fn(Voter, Voter, f64) -> f64,
    {
        let n = instance.n();
        if tree.n() != n {
            return Err(TreeError::SizeMismatch { tree: tree.n(), instance: n });
        }
        let profile = instance.profile();
        let mut table = DpTable {
            labels: vec![Vec::new(); n + 1],
            values: vec![Vec::new(); n + 1],
            picks: vec![Vec::new(); n + 1],
        };
        for r in tree.post_order() {
            let labels = candidate_labels(profile, tree, r);
            let mut values = Vec::with_capacity(labels.len());
            let mut picks = Vec::with_capacity(labels.len());
            for &g in &labels {
                let base = own(r, g);
                if !base.is_finite() {
                    return Err(TreeError::NonFiniteCost { voter: r, guru: g });
                }
                let mut total = base;
                let mut chosen = Vec::with_capacity(tree.children(r).len());
                for &u in tree.children(r) {
                    let mut best = (f64::INFINITY, ABSTAIN);
                    for (&g_u, &v) in table.labels[u].iter().zip(&table.values[u]) {
                        if v.is_finite() && in_label_set(profile, tree, r, u, g, g_u) {
                            let c = contribution(g, g_u, v);
                            if c < best.0 {
                                best = (c, g_u);
                            }
                        }
                    }
                    total += best.0;
                    chosen.push(best.1);
                }
                values.push(total);
                picks.push(chosen);
            }
            table.labels[r] = labels;
            table.values[r] = values;
            table.picks[r] = picks;
        }
        Ok(table)
    }

    /// Labels of `r` that satisfy condition (b), in label order.
    pub fn labels(&self, r: Voter) -> &[Voter] {
        &self.labels[r]
    }

    /// `V(r, g)`; infinite when no local equilibrium has that label.
    pub fn value(&self, r: Voter, g: Voter) -> f64 {
        self.position(r, g).map_or(f64::INFINITY, |k| self.values[r][k])
    }

    /// Finite entries of `r` in label order.
    pub fn entries(&self, r: Voter) -> impl Iterator<Item = (Voter, f64)> + '_ {
        self.labels[r]
            .iter()
            .copied()
            .zip(self.values[r].iter().copied())
            .filter(|(_, v)| v.is_finite())
    }

    /// Labels picked for the children of `r` under label `g`.
    pub fn picks(&self, r: Voter, g: Voter) -> Option<&[Voter]> {
        let k = self.position(r, g)?;
        self.values[r][k].is_finite().then(|| self.picks[r][k].as_slice())
    }

    /// Smallest entry of `r`, earliest label on ties.
    pub fn best(&self, r: Voter) -> Option<(Voter, f64)> {
        self.entries(r).fold(None, |best, (g, v)| match best {
            Some((_, b)) if b <= v => best,
            _ => Some((g, v)),
        })
    }

    fn position(&self, r: Voter, g: Voter) -> Option<usize> {
        self.labels[r].iter().position(|&x| x == g)
    }

    /// The local equilibrium on `T_r` behind a finite entry `V(r, g)`.
    pub fn reconstruct(&self, tree: &RootedTree, r: Voter, g: Voter) -> Option<BTreeMap<Voter, Voter>> {
        self.picks(r, g)?;
        let mut d = BTreeMap::new();
        let mut stack = vec![(r, g)];
        while let Some((v, label)) = stack.pop() {
            let choice = if label == v || label == ABSTAIN {
                label
            } else if let Some(u) = tree.child_towards(v, label) {
                u
            } else {
                tree.parent(v).expect("external labels only below the root")
            };
            d.insert(v, choice);
            let picks = self.picks(v, label).expect("picked labels are finite");
            stack.extend(tree.children(v).iter().copied().zip(picks.iter().copied()));
        }
        Some(d)
    }

    fn witness(&self, tree: &RootedTree, root_labels: &[(Voter, Voter)]) -> DelegationFunction {
        let mut raw = vec![ABSTAIN; tree.n() + 1];
        for &(root, label) in root_labels {
            for (v, c) in self.reconstruct(tree, root, label).expect("root label is finite") {
                raw[v] = c;
            }
        }
        DelegationFunction::from_raw(raw)
    }
}

/// Optimal MINPHI value with a witness equilibrium.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeSolution {
    pub value: f64,
    pub witness: DelegationFunction,
}

/// Optimal value of one of the integer objectives with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeOptimum {
    pub value: usize,
    pub witness: DelegationFunction,
}

/// Table of `V(r, g)` for the additive cost `phi`.
pub fn minphi_table<P: Phi + ?Sized>(instance: &Instance, tree: &RootedTree, phi: &P) -> Result<DpTable, TreeError> {
    DpTable::build(instance, tree, |r, g| phi.cost(r, g), |_, _, v| v)
}

/// Minimum of Σᵢ Φᵢ(gu(i)) over all equilibria. Trees always have one.
pub fn minphi<P: Phi + ?Sized>(instance: &Instance, tree: &RootedTree, phi: &P) -> Result<TreeSolution, TreeError> {
    let table = minphi_table(instance, tree, phi)?;
    let mut value = 0.0;
    let mut root_labels = Vec::new();
    for &root in tree.roots() {
        let (label, v) = table.best(root).expect("every tree admits an equilibrium");
        value += v;
        root_labels.push((root, label));
    }
    Ok(TreeSolution {
        value,
        witness: table.witness(tree, &root_labels),
    })
}

fn check_memb_query(instance: &Instance, voter: Voter) -> Result<(), TreeError> {
    if voter == 0 || voter > instance.n() {
        return Err(TreeError::NoSuchVoter { voter, n: instance.n() });
    }
    if instance.profile().is_abstainer(voter) {
        return Err(TreeError::AbstainerQuery(voter));
    }
    Ok(())
}

/// MEMB on a tree, rooted at the queried voter.
pub fn solve_memb_tree(instance: &Instance, voter: Voter) -> Result<Decision, TreeError> {
    check_memb_query(instance, voter)?;
    let tree = RootedTree::new(instance.network(), voter)?;
    let solution = minphi(instance, &tree, &MembershipPhi(voter))?;
    Ok(if solution.value < 0.0 {
        Decision::Yes(solution.witness)
    } else {
        Decision::No
    })
}

fn integer_optimum(solution: TreeSolution) -> TreeOptimum {
    TreeOptimum {
        value: solution.value.round() as usize,
        witness: solution.witness,
    }
}

/// MINABST on a tree rooted at voter 1.
pub fn solve_minabst_tree(instance: &Instance) -> Result<TreeOptimum, TreeError> {
    let tree = RootedTree::new(instance.network(), 1)?;
    minphi(instance, &tree, &AbstentionPhi).map(integer_optimum)
}

/// MINDIS on a tree rooted at voter 1.
pub fn solve_mindis_tree(instance: &Instance) -> Result<TreeOptimum, TreeError> {
    let tree = RootedTree::new(instance.network(), 1)?;
    minphi(instance, &tree, &DissatisfactionPhi(instance.profile())).map(integer_optimum)
}

/// Table of `V^K(r, g)`: the fewest voters of `T_r` with guru `g` when
/// every other guru inside `T_r` has voting power at most `k`.
pub fn minmaxvp_table(instance: &Instance, tree: &RootedTree, k: usize) -> Result<DpTable, TreeError> {
    let k = k as f64;
    DpTable::build(
        instance,
        tree,
        |_, g| if g == ABSTAIN { 0.0 } else { 1.0 },
        |g, g_u, v| {
            if g_u == g {
                v
            } else if v <= k {
                0.0
            } else {
                f64::INFINITY
            }
        },
    )
}

/// Root labels whose entry is at most `k`, one per component.
fn labels_within(table: &DpTable, tree: &RootedTree, k: usize) -> Option<Vec<(Voter, Voter)>> {
    tree.roots()
        .iter()
        .map(|&root| match table.best(root) {
            Some((g, v)) if v <= k as f64 => Some((root, g)),
            _ => None,
        })
        .collect()
}

/// MINMAXVP on a tree rooted at voter 1. `K` starts at 0 so that an
/// equilibrium in which everybody abstains scores 0.
pub fn solve_minmaxvp_tree(instance: &Instance) -> Result<TreeOptimum, TreeError> {
    let tree = RootedTree::new(instance.network(), 1)?;
    for k in 0..=instance.n() {
        let table = minmaxvp_table(instance, &tree, k)?;
        if let Some(root_labels) = labels_within(&table, &tree, k) {
            return Ok(TreeOptimum {
                value: k,
                witness: table.witness(&tree, &root_labels),
            });
        }
    }
    unreachable!("voting power never exceeds n")
}

/// Dedicated solvers for a star rooted at its centre. Every leaf entry is
/// computed in constant time, and MINMAXVP needs only `K ∈ {0, 1}`.
pub struct StarSolver<'a> {
    instance: &'a Instance,
    center: Voter,
    leaves: Vec<Voter>,
}

/// Centre entry: the label, its value and the label picked per leaf.
type CenterEntry = (Voter, f64, Vec<Voter>);

impl<'a> StarSolver<'a> {
    pub fn new(instance: &'a Instance) -> Result<Self, TreeError> {
        let center = instance.network().star_center().ok_or(TreeError::NotAStar)?;
        let leaves = instance.voters().filter(|&v| v != center).collect();
        Ok(StarSolver { instance, center, leaves })
    }

    pub fn center(&self) -> Voter {
        self.center
    }

    fn center_entries<O, C>(&self, own: O, contribution: C) -> Vec<CenterEntry>
    where
        O: Fn(Voter, Voter) -> f64,
        C: Fn(Voter, Voter, f64) -> f64,
    {
        let profile = self.instance.profile();
        let c = self.center;
        let mut labels: Vec<Voter> = profile.acceptable(c).to_vec();
        labels.push(if profile.is_abstainer(c) { ABSTAIN } else { c });
        sort_labels(&mut labels);
        labels
            .into_iter()
            .map(|g| {
                let mut total = own(c, g);
                let mut picks = Vec::with_capacity(self.leaves.len());
                for &l in &self.leaves {
                    // Label_l(g) ⊆ {g, l, 0}, already in label order
                    let mut options = if g == l { vec![l] } else { vec![g, l, ABSTAIN] };
                    sort_labels(&mut options);
                    options.dedup();
                    let mut best = (f64::INFINITY, ABSTAIN);
                    for g_l in options {
                        let admissible = guru_is_admissible(profile, l, g_l);
                        let allowed = g_l == g
                            || (g != l && profile.prefers(c, g, g_l) && profile.prefers(l, g_l, g));
                        if admissible && allowed {
                            let value = contribution(g, g_l, own(l, g_l));
                            if value < best.0 {
                                best = (value, g_l);
                            }
                        }
                    }
                    total += best.0;
                    picks.push(best.1);
                }
                (g, total, picks)
            })
            .collect()
    }

    fn best(entries: &[CenterEntry]) -> Option<&CenterEntry> {
        entries.iter().filter(|e| e.1.is_finite()).fold(None, |best, e| match best {
            Some(b) if b.1 <= e.1 => best,
            _ => Some(e),
        })
    }

    fn witness(&self, entry: &CenterEntry) -> DelegationFunction {
        let c = self.center;
        let mut raw = vec![ABSTAIN; self.instance.n() + 1];
        raw[c] = entry.0;
        for (&l, &g_l) in self.leaves.iter().zip(&entry.2) {
            raw[l] = if g_l == l || g_l == ABSTAIN { g_l } else { c };
        }
        DelegationFunction::from_raw(raw)
    }

    pub fn minphi<P: Phi + ?Sized>(&self, phi: &P) -> Result<TreeSolution, TreeError> {
        for i in self.instance.voters() {
            for g in (0..=self.instance.n()).filter(|&g| guru_is_admissible(self.instance.profile(), i, g)) {
                if !phi.cost(i, g).is_finite() {
                    return Err(TreeError::NonFiniteCost { voter: i, guru: g });
                }
            }
        }
        let entries = self.center_entries(|i, g| phi.cost(i, g), |_, _, v| v);
        let best = Self::best(&entries).expect("every star admits an equilibrium");
        Ok(TreeSolution {
            value: best.1,
            witness: self.witness(best),
        })
    }

    pub fn memb(&self, voter: Voter) -> Result<Decision, TreeError> {
        check_memb_query(self.instance, voter)?;
        let solution = self.minphi(&MembershipPhi(voter))?;
        Ok(if solution.value < 0.0 {
            Decision::Yes(solution.witness)
        } else {
            Decision::No
        })
    }

    pub fn minabst(&self) -> TreeOptimum {
        integer_optimum(self.minphi(&AbstentionPhi).expect("finite costs"))
    }

    pub fn mindis(&self) -> TreeOptimum {
        integer_optimum(self.minphi(&DissatisfactionPhi(self.instance.profile())).expect("finite costs"))
    }

    /// A guru other than the centre's holds at most herself, so `V^K` is the
    /// same for every `K ≥ 1`.
    pub fn minmaxvp(&self) -> TreeOptimum {
        let own = |_: Voter, g: Voter| if g == ABSTAIN { 0.0 } else { 1.0 };
        let table = |k: f64| {
            self.center_entries(own, move |g, g_l, v| {
                if g_l == g {
                    v
                } else if v <= k {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
        };
        let zero = table(0.0);
        if let Some(entry) = Self::best(&zero).filter(|e| e.1 <= 0.0) {
            return TreeOptimum {
                value: 0,
                witness: self.witness(entry),
            };
        }
        let one = table(1.0);
        let entry = Self::best(&one).expect("every star admits an equilibrium");
        TreeOptimum {
            value: (entry.1.round() as usize).max(1),
            witness: self.witness(entry),
        }
    }

    pub fn optimize(&self, objective: Objective) -> TreeOptimum {
        match objective {
            Objective::Dissatisfaction => self.mindis(),
            Objective::MaxVotingPower => self.minmaxvp(),
            Objective::Abstention => self.minabst(),
        }
    }
}

/// Dispatches an objective to the general tree solvers.
pub fn optimize_tree(instance: &Instance, objective: Objective) -> Result<TreeOptimum, TreeError> {
    match objective {
        Objective::Dissatisfaction => solve_mindis_tree(instance),
        Objective::MaxVotingPower => solve_minmaxvp_tree(instance),
        Objective::Abstention => solve_minabst_tree(instance),
    }
}
