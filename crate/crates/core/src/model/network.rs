use std::collections::VecDeque;

use super::{ModelError, Voter};

/// Undirected simple graph over voters `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SocialNetwork {
    n: usize,
    // adj[0] is unused; every list is sorted ascending.
    adj: Vec<Vec<Voter>>,
    edge_count: usize,
}

impl SocialNetwork {
    pub fn new<I>(n: usize, edges: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (Voter, Voter)>,
    {
        let mut adj = vec![Vec::new(); n + 1];
        let mut edge_count = 0;
        for (a, b) in edges {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(ModelError::VoterOutOfRange { voter: v, n });
                }
            }
            if a == b {
                return Err(ModelError::SelfLoop(a));
            }
            if adj[a].contains(&b) {
                return Err(ModelError::DuplicateEdge(a.min(b), a.max(b)));
            }
            adj[a].push(b);
            adj[b].push(a);
            edge_count += 1;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(SocialNetwork { n, adj, edge_count })
    }

    /// Network with no edges.
    pub fn empty(n: usize) -> Self {
        SocialNetwork {
            n,
            adj: vec![Vec::new(); n + 1],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (1..=n).flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    /// Path `1 - 2 - ... - n`.
    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i, i + 1))).expect("path is simple")
    }

    /// Cycle `1 - 2 - ... - n - 1`, for `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self, ModelError> {
        if n < 3 {
            return Err(ModelError::CycleTooShort(n));
        }
        Self::new(n, (1..n).map(|i| (i, i + 1)).chain(std::iter::once((n, 1))))
    }

    /// Star centred on voter 1.
    pub fn star(n: usize) -> Self {
        Self::new(n, (2..=n).map(|i| (1, i))).expect("star is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn voters(&self) -> std::ops::RangeInclusive<Voter> {
        1..=self.n
    }

    pub fn neighbors(&self, i: Voter) -> &[Voter] {
        &self.adj[i]
    }

    pub fn degree(&self, i: Voter) -> usize {
        self.adj[i].len()
    }

    pub fn max_degree(&self) -> usize {
        self.voters().map(|i| self.degree(i)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, i: Voter, j: Voter) -> bool {
        i != 0 && i <= self.n && self.adj[i].binary_search(&j).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Voter, Voter)> + '_ {
        self.voters().flat_map(move |i| {
            self.adj[i]
                .iter()
                .copied()
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n + 1];
        let mut queue = VecDeque::from([1]);
        seen[1] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// Connected and acyclic.
    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.edge_count == self.n - 1 && self.is_connected()
    }

    pub fn is_forest(&self) -> bool {
        // a graph is a forest iff #edges = n - #components
        let mut seen = vec![false; self.n + 1];
        let mut components = 0;
        for s in self.voters() {
            if seen[s] {
                continue;
            }
            components += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        self.edge_count + components == self.n
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count == self.n * self.n.saturating_sub(1) / 2
    }

    /// Centre of a star network: the voter adjacent to every other voter
    /// when all remaining voters are leaves. For two voters the smaller id
    /// is the centre.
    pub fn star_center(&self) -> Option<Voter> {
        match self.n {
            0 => None,
            1 => Some(1),
            n => {
                if self.edge_count != n - 1 {
                    return None;
                }
                self.voters().find(|&c| self.degree(c) == n - 1)
            }
        }
    }
}
