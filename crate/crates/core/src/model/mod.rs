//! Social networks, preference profiles, delegation functions and the
//! Nash-stability predicates built on them.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

mod delegation;
mod network;
mod profile;

pub use delegation::{guru_of, resolve_gurus, DelegationFunction, GuruResolution};
pub use network::SocialNetwork;
pub use profile::{PreferenceProfile, VoterPreferences};

/// Voters are numbered `1..=n`.
pub type Voter = usize;

/// The value standing for abstention wherever a voter id is expected.
pub const ABSTAIN: Voter = 0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("voter {voter} is outside 1..={n}")]
    VoterOutOfRange { voter: Voter, n: usize },
    #[error("self-loop on voter {0}")]
    SelfLoop(Voter),
    #[error("duplicate edge {0} - {1}")]
    DuplicateEdge(Voter, Voter),
    #[error("a cycle needs at least 3 voters, got {0}")]
    CycleTooShort(usize),
    #[error("voter {voter} cannot list {entry} as acceptable")]
    InvalidAcceptable { voter: Voter, entry: Voter },
    #[error("voter {voter} lists {entry} twice")]
    DuplicateAcceptable { voter: Voter, entry: Voter },
    #[error("invalid full order for voter {voter}: {reason}")]
    InvalidFullOrder { voter: Voter, reason: String },
    #[error("network has {network} voters but profile has {profile}")]
    SizeMismatch { network: usize, profile: usize },
    #[error("voter {voter} cannot delegate to {target}")]
    InvalidDelegation { voter: Voter, target: Voter },
    #[error("expected {expected} entries, found {found}")]
    WrongLength { expected: usize, found: usize },
}

/// A social network together with the voters' preferences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    network: SocialNetwork,
    profile: PreferenceProfile,
}

impl Instance {
    pub fn new(network: SocialNetwork, profile: PreferenceProfile) -> Result<Self, ModelError> {
        if network.n() != profile.n() {
            return Err(ModelError::SizeMismatch {
                network: network.n(),
                profile: profile.n(),
            });
        }
        Ok(Instance { network, profile })
    }

    pub fn n(&self) -> usize {
        self.network.n()
    }

    pub fn network(&self) -> &SocialNetwork {
        &self.network
    }

    pub fn profile(&self) -> &PreferenceProfile {
        &self.profile
    }

    pub fn voters(&self) -> std::ops::RangeInclusive<Voter> {
        self.network.voters()
    }

    pub fn maxa(&self) -> usize {
        self.profile.maxa()
    }
}

/// Rank of `g` in voter `i`'s order (1 is best).
pub fn rank(profile: &PreferenceProfile, i: Voter, g: Voter) -> usize {
    profile.rank(i, g)
}

/// `Att(i, d)`.
pub fn attainable(instance: &Instance, d: &DelegationFunction, i: Voter) -> BTreeSet<Voter> {
    resolve_gurus(d).attainable(instance.network(), i)
}

/// Stability of voter `i` given an already resolved `d`.
pub fn is_stable_under(instance: &Instance, resolution: &GuruResolution, i: Voter) -> bool {
    let profile = instance.profile();
    let current = resolution.guru(i);
    let current_rank = profile.rank(i, current);
    let beats_current = |g: Voter| g != current && profile.rank(i, g) <= current_rank;
    if beats_current(ABSTAIN) || beats_current(i) {
        return false;
    }
    !instance
        .network()
        .neighbors(i)
        .iter()
        .any(|&j| beats_current(resolution.guru(j)))
}

/// Nash stability of `d` for voter `i`: `gu(i,d)` beats every other guru
/// in `Att(i,d) ∪ {0, i}`.
pub fn is_nash_stable_for(instance: &Instance, d: &DelegationFunction, i: Voter) -> bool {
    is_stable_under(instance, &resolve_gurus(d), i)
}

pub fn is_equilibrium(instance: &Instance, d: &DelegationFunction) -> bool {
    let resolution = resolve_gurus(d);
    instance
        .voters()
        .all(|i| is_stable_under(instance, &resolution, i))
}

/// Necessary condition satisfied by every voter at an equilibrium: the guru
/// is acceptable, or is abstention for an abstainer, or is the voter herself
/// for a non-abstainer.
pub fn guru_is_admissible(profile: &PreferenceProfile, i: Voter, g: Voter) -> bool {
    if g == ABSTAIN {
        profile.is_abstainer(i)
    } else if g == i {
        !profile.is_abstainer(i)
    } else {
        profile.accepts(i, g)
    }
}

/// The three objective values of a delegation function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measures {
    /// Sum over voters of `rank(i, gu(i,d)) - 1`.
    pub dissatisfaction: usize,
    /// Largest voting power of a guru, 0 when nobody votes.
    pub max_voting_power: usize,
    pub abstention_count: usize,
    pub voting_power: BTreeMap<Voter, usize>,
}

pub fn measures(instance: &Instance, d: &DelegationFunction) -> Measures {
    measures_of(instance, &resolve_gurus(d))
}

pub fn measures_of(instance: &Instance, resolution: &GuruResolution) -> Measures {
    let profile = instance.profile();
    let mut voting_power: BTreeMap<Voter, usize> =
        resolution.gurus().iter().map(|&g| (g, 0)).collect();
    let mut dissatisfaction = 0;
    let mut abstention_count = 0;
    for i in instance.voters() {
        let g = resolution.guru(i);
        dissatisfaction += profile.rank(i, g) - 1;
        if g == ABSTAIN {
            abstention_count += 1;
        } else {
            *voting_power.entry(g).or_insert(0) += 1;
        }
    }
    Measures {
        dissatisfaction,
        max_voting_power: voting_power.values().copied().max().unwrap_or(0),
        abstention_count,
        voting_power,
    }
}
