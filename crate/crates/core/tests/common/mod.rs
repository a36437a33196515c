//! Brute-force oracles written from the definitions, sharing nothing with
//! the library's solvers beyond the instance accessors.

#![allow(dead_code)]

use std::collections::BTreeSet;

use liquid_delegation::{DelegationFunction, Instance, PreferenceProfile, SocialNetwork, Voter};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `gu[i]` for `i` in `1..=n` (`gu[0]` unused); circuits give 0.
pub fn gurus(choice: &[Voter]) -> Vec<Voter> {
    let n = choice.len() - 1;
    let mut gu = vec![0; n + 1];
    for (i, slot) in gu.iter_mut().enumerate().skip(1) {
        let mut cur = i;
        let mut steps = 0;
        *slot = loop {
            let next = choice[cur];
            if next == cur || next == 0 {
                break next;
            }
            steps += 1;
            if steps > n {
                break 0;
            }
            cur = next;
        };
    }
    gu
}

/// `gu(i)` strictly beats every other guru in `Att(i) ∪ {0, i}`.
pub fn stable(instance: &Instance, choice: &[Voter]) -> bool {
    let p = instance.profile();
    let gu = gurus(choice);
    instance.voters().all(|i| {
        let mut options: BTreeSet<Voter> = instance.network().neighbors(i).iter().map(|&j| gu[j]).collect();
        options.insert(0);
        options.insert(i);
        options.remove(&gu[i]);
        options.iter().all(|&g| p.rank(i, gu[i]) < p.rank(i, g))
    })
}

/// Every delegation function, as choice vectors with a dummy slot 0.
pub fn all_delegations(network: &SocialNetwork) -> Vec<Vec<Voter>> {
    let n = network.n();
    let options: Vec<Vec<Voter>> = (1..=n)
        .map(|i| {
            let mut o = vec![i, 0];
            o.extend_from_slice(network.neighbors(i));
            o
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let mut choice = vec![0];
        choice.extend((0..n).map(|k| options[k][idx[k]]));
        out.push(choice);
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn equilibria(instance: &Instance) -> Vec<Vec<Voter>> {
    all_delegations(instance.network())
        .into_iter()
        .filter(|c| stable(instance, c))
        .collect()
}

pub fn choice_of(d: &DelegationFunction) -> Vec<Voter> {
    let mut c = vec![0];
    c.extend_from_slice(d.choices());
    c
}

/// (dissatisfaction, max voting power, abstentions).
pub fn objectives(instance: &Instance, choice: &[Voter]) -> (usize, usize, usize) {
    let gu = gurus(choice);
    let p = instance.profile();
    let n = instance.n();
    let dis = (1..=n).map(|i| p.rank(i, gu[i]) - 1).sum();
    let mut power = vec![0usize; n + 1];
    for &g in &gu[1..] {
        power[g] += 1;
    }
    let maxvp = power[1..].iter().copied().max().unwrap_or(0);
    (dis, maxvp, power[0])
}

pub fn random_lists(rng: &mut ChaCha8Rng, n: usize, cap: usize, abstainer_prob: f64) -> PreferenceProfile {
    let lists = (1..=n).map(|i| {
        let mut others: Vec<Voter> = (1..=n).filter(|&j| j != i).collect();
        others.shuffle(rng);
        others.truncate(rng.gen_range(0..=cap.min(n - 1)));
        (rng.gen_bool(abstainer_prob), others)
    });
    PreferenceProfile::from_lists(lists.collect::<Vec<_>>()).unwrap()
}

/// Random labelled tree: each voter, in a shuffled order, attaches to an
/// earlier one.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> SocialNetwork {
    let mut labels: Vec<Voter> = (1..=n).collect();
    labels.shuffle(rng);
    let edges: Vec<(Voter, Voter)> = (1..n).map(|k| (labels[k], labels[rng.gen_range(0..k)])).collect();
    SocialNetwork::new(n, edges).unwrap()
}

pub fn random_instance(rng: &mut ChaCha8Rng, network: SocialNetwork, cap: usize, abstainer_prob: f64) -> Instance {
    let n = network.n();
    let profile = random_lists(rng, n, cap, abstainer_prob);
    Instance::new(network, profile).unwrap()
}
