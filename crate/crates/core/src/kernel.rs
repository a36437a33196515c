//! The delegation-acceptability digraph and its kernels.
//!
//! On a complete social network the guru sets of equilibria are exactly the
//! abstainer-free kernels of this digraph, which turns existence questions
//! into kernel search.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{is_equilibrium, DelegationFunction, Instance, PreferenceProfile, Voter, ABSTAIN};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("the social network is not complete")]
    NotComplete,
    #[error("voter {0} is an abstainer")]
    Abstainer(Voter),
    #[error("{0:?} is not a kernel of the acceptability digraph")]
    NotAKernel(Vec<Voter>),
    #[error("the preference profile is not symmetric")]
    NotSymmetric,
    #[error("the delegation function is not an equilibrium")]
    NotAnEquilibrium,
}

/// Digraph on the non-abstainers with an arc `i -> j` iff `j ∈ Acc(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptabilityDigraph {
    n: usize,
    vertices: Vec<Voter>,
    is_vertex: Vec<bool>,
    out: Vec<Vec<Voter>>,
    inc: Vec<Vec<Voter>>,
}

impl AcceptabilityDigraph {
    pub fn vertices(&self) -> &[Voter] {
        &self.vertices
    }

    pub fn contains(&self, v: Voter) -> bool {
        v != 0 && v <= self.n && self.is_vertex[v]
    }

    /// Out-neighbours of `v`, ascending.
    pub fn successors(&self, v: Voter) -> &[Voter] {
        &self.out[v]
    }

    pub fn predecessors(&self, v: Voter) -> &[Voter] {
        &self.inc[v]
    }

    pub fn has_arc(&self, u: Voter, v: Voter) -> bool {
        self.contains(u) && self.out[u].binary_search(&v).is_ok()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (Voter, Voter)> + '_ {
        self.vertices
            .iter()
            .flat_map(move |&u| self.out[u].iter().map(move |&v| (u, v)))
    }

    pub fn is_independent(&self, set: &[Voter]) -> bool {
        let members: BTreeSet<_> = set.iter().copied().collect();
        set.iter()
            .all(|&u| self.out[u].iter().all(|v| !members.contains(v)))
    }

    pub fn is_absorbing(&self, set: &[Voter]) -> bool {
        let members: BTreeSet<_> = set.iter().copied().collect();
        self.vertices
            .iter()
            .filter(|v| !members.contains(v))
            .all(|&u| self.out[u].iter().any(|v| members.contains(v)))
    }

    /// Independent, absorbing, and made of vertices of the digraph.
    pub fn is_kernel(&self, set: &[Voter]) -> bool {
        set.iter().all(|&v| self.contains(v)) && self.is_independent(set) && self.is_absorbing(set)
    }
}

pub fn build_acceptability_digraph(instance: &Instance) -> AcceptabilityDigraph {
    let n = instance.n();
    let profile = instance.profile();
    let is_vertex: Vec<bool> = (0..=n).map(|v| v != 0 && !profile.is_abstainer(v)).collect();
    let vertices: Vec<Voter> = (1..=n).filter(|&v| is_vertex[v]).collect();
    let mut out = vec![Vec::new(); n + 1];
    let mut inc = vec![Vec::new(); n + 1];
    for &u in &vertices {
        for &v in profile.acceptable(u) {
            if is_vertex[v] {
                out[u].push(v);
                inc[v].push(u);
            }
        }
        out[u].sort_unstable();
    }
    for list in &mut inc {
        list.sort_unstable();
    }
    AcceptabilityDigraph {
        n,
        vertices,
        is_vertex,
        out,
        inc,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Undecided,
    In,
    Out,
}

struct KernelSearch<'a> {
    g: &'a AcceptabilityDigraph,
    limit: Option<usize>,
    found: Vec<Vec<Voter>>,
}

impl KernelSearch<'_> {
    /// Applies forced decisions until a fixpoint; false on contradiction.
    fn propagate(&self, status: &mut [Status]) -> bool {
        loop {
            let mut changed = false;
            for &v in &self.g.vertices {
                match status[v] {
                    Status::In => {
                        for &w in self.g.out[v].iter().chain(&self.g.inc[v]) {
                            match status[w] {
                                Status::In => return false,
                                Status::Undecided => {
                                    status[w] = Status::Out;
                                    changed = true;
                                }
                                Status::Out => {}
                            }
                        }
                    }
                    Status::Out => {
                        let mut absorbed = false;
                        let mut open = None;
                        let mut open_count = 0;
                        for &w in &self.g.out[v] {
                            match status[w] {
                                Status::In => {
                                    absorbed = true;
                                    break;
                                }
                                Status::Undecided => {
                                    open_count += 1;
                                    open = Some(w);
                                }
                                Status::Out => {}
                            }
                        }
                        if !absorbed {
                            match (open_count, open) {
                                (0, _) => return false,
                                (1, Some(w)) => {
                                    status[w] = Status::In;
                                    changed = true;
                                }
                                _ => {}
                            }
                        }
                    }
                    Status::Undecided => {
                        // a sink can only be absorbed by itself
                        if self.g.out[v].is_empty() {
                            status[v] = Status::In;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(&mut self, mut status: Vec<Status>) {
        if self.limit.is_some_and(|l| self.found.len() >= l) {
            return;
        }
        if !self.propagate(&mut status) {
            return;
        }
        match self
            .g
            .vertices
            .iter()
            .copied()
            .find(|&v| status[v] == Status::Undecided)
        {
            None => {
                let kernel: Vec<Voter> = self
                    .g
                    .vertices
                    .iter()
                    .copied()
                    .filter(|&v| status[v] == Status::In)
                    .collect();
                debug_assert!(self.g.is_kernel(&kernel));
                self.found.push(kernel);
            }
            Some(v) => {
                // In before Out yields kernels in lexicographic order
                let mut with = status.clone();
                with[v] = Status::In;
                self.search(with);
                status[v] = Status::Out;
                self.search(status);
            }
        }
    }
}

fn kernels_with(
    g: &AcceptabilityDigraph,
    forced_in: &[Voter],
    limit: Option<usize>,
) -> Vec<Vec<Voter>> {
    let mut status = vec![Status::Undecided; g.n + 1];
    for &v in forced_in {
        if !g.contains(v) {
            return Vec::new();
        }
        status[v] = Status::In;
    }
    let mut search = KernelSearch {
        g,
        limit,
        found: Vec::new(),
    };
    search.search(status);
    search.found.sort();
    search.found
}

/// All kernels (each sorted ascending), in lexicographic order, stopping
/// after `limit` of them when a limit is given.
pub fn enumerate_kernels(g: &AcceptabilityDigraph, limit: Option<usize>) -> Vec<Vec<Voter>> {
    kernels_with(g, &[], limit)
}

/// Kernels containing voter `v`.
pub fn enumerate_kernels_containing(
    g: &AcceptabilityDigraph,
    v: Voter,
    limit: Option<usize>,
) -> Vec<Vec<Voter>> {
    kernels_with(g, &[v], limit)
}

/// Delegation function whose gurus are exactly the kernel `kernel`: members
/// vote, everyone else delegates directly to the favourite in `kernel ∪ {0}`.
pub fn equilibrium_from_kernel(
    instance: &Instance,
    kernel: &[Voter],
) -> Result<DelegationFunction, KernelError> {
    if !instance.network().is_complete() {
        return Err(KernelError::NotComplete);
    }
    let profile = instance.profile();
    if let Some(&a) = kernel.iter().find(|&&v| v != 0 && v <= instance.n() && profile.is_abstainer(v)) {
        return Err(KernelError::Abstainer(a));
    }
    let g = build_acceptability_digraph(instance);
    let mut sorted = kernel.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != kernel.len() || !g.is_kernel(&sorted) {
        return Err(KernelError::NotAKernel(kernel.to_vec()));
    }
    Ok(canonical_delegation(instance, &sorted))
}

fn canonical_delegation(instance: &Instance, kernel: &[Voter]) -> DelegationFunction {
    let profile = instance.profile();
    let mut d = DelegationFunction::all_vote(instance.n());
    for i in instance.voters() {
        if kernel.binary_search(&i).is_err() {
            let best = profile
                .best_of(i, kernel.iter().copied().chain(std::iter::once(ABSTAIN)))
                .expect("candidate set contains abstention");
            d.set(i, best);
        }
    }
    d
}

/// Checks that the guru set of the equilibrium `d` is an abstainer-free
/// kernel of the acceptability digraph.
pub fn gurus_form_kernel(instance: &Instance, d: &DelegationFunction) -> Result<bool, KernelError> {
    if !instance.network().is_complete() {
        return Err(KernelError::NotComplete);
    }
    if !is_equilibrium(instance, d) {
        return Err(KernelError::NotAnEquilibrium);
    }
    let gurus: Vec<Voter> = instance.voters().filter(|&i| d.get(i) == i).collect();
    if gurus.iter().any(|&g| instance.profile().is_abstainer(g)) {
        return Ok(false);
    }
    Ok(build_acceptability_digraph(instance).is_kernel(&gurus))
}

/// `j ∈ Acc(i) ⇔ i ∈ Acc(j)` for all voters.
pub fn is_symmetric(profile: &PreferenceProfile) -> bool {
    (1..=profile.n()).all(|i| profile.acceptable(i).iter().all(|&j| profile.accepts(j, i)))
}

/// Equilibrium of a symmetric complete instance in which `i` is a guru.
///
/// The guru set is grown greedily from `{i}` by adding the lowest-index
/// compatible non-abstainers; in a symmetric digraph the resulting maximal
/// independent set is a kernel.
pub fn symmetric_equilibrium_with_guru(
    instance: &Instance,
    i: Voter,
) -> Result<DelegationFunction, KernelError> {
    if !instance.network().is_complete() {
        return Err(KernelError::NotComplete);
    }
    if !is_symmetric(instance.profile()) {
        return Err(KernelError::NotSymmetric);
    }
    if instance.profile().is_abstainer(i) {
        return Err(KernelError::Abstainer(i));
    }
    let g = build_acceptability_digraph(instance);
    let mut set = vec![i];
    for &v in g.vertices() {
        if v != i && set.iter().all(|&u| !g.has_arc(u, v) && !g.has_arc(v, u)) {
            set.push(v);
        }
    }
    set.sort_unstable();
    equilibrium_from_kernel(instance, &set)
}
