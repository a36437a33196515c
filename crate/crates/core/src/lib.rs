//! Delegation games in liquid democracy on social networks.
//!
//! Voters sit on an undirected social network. Each one votes, abstains or
//! delegates to a neighbour, and delegations are followed transitively to a
//! guru. This crate resolves gurus, decides and constructs Nash-stable
//! delegation functions, optimizes over them on trees, simulates delegation
//! dynamics and builds the hardness gadgets used to study the problem.

pub mod dynamics;
pub mod exact;
pub mod io;
pub mod kernel;
pub mod model;
pub mod reductions;
pub mod tree_dp;

pub use model::{
    DelegationFunction, GuruResolution, Instance, ModelError, PreferenceProfile, SocialNetwork,
    Voter, ABSTAIN,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/kernels.md")]
    mod kernels {}
    #[doc = include_str!("../../../book/src/exact.md")]
    mod exact {}
    #[doc = include_str!("../../../book/src/trees.md")]
    mod trees {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/reductions.md")]
    mod reductions {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
