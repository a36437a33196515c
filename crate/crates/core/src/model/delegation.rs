use std::collections::BTreeSet;
use std::fmt;

use super::{ModelError, SocialNetwork, Voter, ABSTAIN};

/// A delegation function `d`: each voter votes (`d(i) = i`), abstains
/// (`d(i) = 0`) or delegates to a neighbour.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DelegationFunction {
    // choice[0] is unused
    choice: Vec<Voter>,
}

impl DelegationFunction {
    /// Validates `choices` (listed for voters `1..=n` in order) against the network.
    pub fn new(network: &SocialNetwork, choices: Vec<Voter>) -> Result<Self, ModelError> {
        if choices.len() != network.n() {
            return Err(ModelError::WrongLength {
                expected: network.n(),
                found: choices.len(),
            });
        }
        let mut choice = Vec::with_capacity(choices.len() + 1);
        choice.push(ABSTAIN);
        choice.extend(choices);
        let d = DelegationFunction { choice };
        d.validate(network)?;
        Ok(d)
    }

    /// Every voter declares intention to vote.
    pub fn all_vote(n: usize) -> Self {
        DelegationFunction {
            choice: (0..=n).collect(),
        }
    }

    pub(crate) fn from_raw(choice: Vec<Voter>) -> Self {
        debug_assert!(choice.first() == Some(&ABSTAIN) || choice.is_empty());
        DelegationFunction { choice }
    }

    pub fn validate(&self, network: &SocialNetwork) -> Result<(), ModelError> {
        if self.n() != network.n() {
            return Err(ModelError::WrongLength {
                expected: network.n(),
                found: self.n(),
            });
        }
        for i in network.voters() {
            let j = self.choice[i];
            if j != i && j != ABSTAIN && !network.has_edge(i, j) {
                return Err(ModelError::InvalidDelegation { voter: i, target: j });
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.choice.len().saturating_sub(1)
    }

    pub fn get(&self, i: Voter) -> Voter {
        self.choice[i]
    }

    /// Choices of voters `1..=n`.
    pub fn choices(&self) -> &[Voter] {
        &self.choice[1..]
    }

    pub(crate) fn raw(&self) -> &[Voter] {
        &self.choice
    }

    /// `d_{i -> j}`: the same function with voter `i` switched to `j`.
    pub fn with_choice(&self, i: Voter, j: Voter) -> Self {
        let mut next = self.clone();
        next.choice[i] = j;
        next
    }

    pub(crate) fn set(&mut self, i: Voter, j: Voter) {
        self.choice[i] = j;
    }

    /// Stable 64-bit FNV-1a digest of the choices.
    pub fn digest(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h = OFFSET;
        for &c in self.choices() {
            for b in (c as u64).to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(PRIME);
            }
        }
        h
    }
}

impl fmt::Display for DelegationFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.choices().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Gurus of every voter under a delegation function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuruResolution {
    gu: Vec<Voter>,
    gurus: BTreeSet<Voter>,
    on_circuit: Vec<bool>,
}

impl GuruResolution {
    /// `gu(i, d)`, with 0 meaning abstention.
    pub fn guru(&self, i: Voter) -> Voter {
        self.gu[i]
    }

    /// `Gurus(d)`.
    pub fn gurus(&self) -> &BTreeSet<Voter> {
        &self.gurus
    }

    /// True when voter `i` lies on a delegation circuit.
    pub fn on_circuit(&self, i: Voter) -> bool {
        self.on_circuit[i]
    }

    pub fn n(&self) -> usize {
        self.gu.len().saturating_sub(1)
    }

    /// Gurus of voters `1..=n`.
    pub fn gurus_by_voter(&self) -> &[Voter] {
        &self.gu[1..]
    }

    /// `Att(i, d)`: the gurus of `i`'s neighbours.
    pub fn attainable(&self, network: &SocialNetwork, i: Voter) -> BTreeSet<Voter> {
        network.neighbors(i).iter().map(|&j| self.gu[j]).collect()
    }
}

const UNSEEN: u8 = 0;
const ON_PATH: u8 = 1;
const DONE: u8 = 2;

/// Follows every delegation chain once. Chains that end in a circuit give
/// guru 0 to the circuit and to every voter feeding into it.
pub fn resolve_gurus(d: &DelegationFunction) -> GuruResolution {
    let n = d.n();
    let choice = d.raw();
    let mut gu = vec![ABSTAIN; n + 1];
    let mut state = vec![UNSEEN; n + 1];
    let mut on_circuit = vec![false; n + 1];
    let mut path = Vec::new();
    let mut pos_in_path = vec![usize::MAX; n + 1];

    for start in 1..=n {
        if state[start] == DONE {
            continue;
        }
        path.clear();
        let mut cur = start;
        let guru = loop {
            match state[cur] {
                DONE => break gu[cur],
                ON_PATH => {
                    for &v in &path[pos_in_path[cur]..] {
                        on_circuit[v] = true;
                    }
                    break ABSTAIN;
                }
                _ => {}
            }
            state[cur] = ON_PATH;
            pos_in_path[cur] = path.len();
            path.push(cur);
            let next = choice[cur];
            if next == cur {
                break cur;
            }
            if next == ABSTAIN {
                break ABSTAIN;
            }
            cur = next;
        };
        for &v in &path {
            gu[v] = guru;
            state[v] = DONE;
        }
    }

    let gurus = (1..=n).filter(|&i| choice[i] == i).collect();
    GuruResolution {
        gu,
        gurus,
        on_circuit,
    }
}

/// Guru of voter `i` alone, by walking its chain (O(chain length)).
pub fn guru_of(d: &DelegationFunction, i: Voter) -> Voter {
    let n = d.n();
    let mut cur = i;
    // a chain that has not terminated after n hops has entered a circuit
    for _ in 0..=n {
        let next = d.get(cur);
        if next == cur {
            return cur;
        }
        if next == ABSTAIN {
            return ABSTAIN;
        }
        cur = next;
    }
    ABSTAIN
}
