use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Instance, PreferenceProfile, SocialNetwork, Voter};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Uniform labelled tree, decoded from a random Prüfer sequence.
    Tree,
    Path,
    /// Voter 1 at the centre.
    Star,
    Complete,
    /// Each edge independently with probability `edge_prob`.
    Gnp,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 5] = [
        GeneratorKind::Tree,
        GeneratorKind::Path,
        GeneratorKind::Star,
        GeneratorKind::Complete,
        GeneratorKind::Gnp,
    ];
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorKind::Tree => "tree",
            GeneratorKind::Path => "path",
            GeneratorKind::Star => "star",
            GeneratorKind::Complete => "complete",
            GeneratorKind::Gnp => "gnp",
        })
    }
}

impl FromStr for GeneratorKind {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| GenerateError::UnknownKind(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileParams {
    /// Upper bound on |Acc(i)|; the actual size is uniform in `0..=cap`.
    pub maxa_cap: usize,
    pub abstainer_prob: f64,
    /// Only read by [`GeneratorKind::Gnp`].
    pub edge_prob: f64,
}

impl Default for ProfileParams {
    fn default() -> Self {
        ProfileParams {
            maxa_cap: 3,
            abstainer_prob: 0.2,
            edge_prob: 0.5,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenerateError {
    #[error("at least one voter is required")]
    NoVoters,
    #[error("{name} = {value} is not a probability")]
    BadProbability { name: &'static str, value: f64 },
    #[error("unknown generator {0:?}; expected tree, path, star, complete or gnp")]
    UnknownKind(String),
}

/// A random instance, fully determined by its arguments.
pub fn generate(kind: GeneratorKind, n: usize, seed: u64, params: &ProfileParams) -> Result<Instance, GenerateError> {
    if n == 0 {
        return Err(GenerateError::NoVoters);
    }
    for (name, value) in [("abstainer_prob", params.abstainer_prob), ("edge_prob", params.edge_prob)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(GenerateError::BadProbability { name, value });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let network = match kind {
        GeneratorKind::Tree => SocialNetwork::new(n, prufer_tree(n, &mut rng)),
        GeneratorKind::Path => Ok(SocialNetwork::path(n)),
        GeneratorKind::Star => Ok(SocialNetwork::star(n)),
        GeneratorKind::Complete => Ok(SocialNetwork::complete(n)),
        GeneratorKind::Gnp => {
            let mut edges = Vec::new();
            for i in 1..=n {
                for j in i + 1..=n {
                    if rng.gen_bool(params.edge_prob) {
                        edges.push((i, j));
                    }
                }
            }
            SocialNetwork::new(n, edges)
        }
    }
    .expect("generated edges are valid");
    let profile = random_profile(n, &mut rng, params);
    Ok(Instance::new(network, profile).expect("sizes agree"))
}

fn random_profile(n: usize, rng: &mut ChaCha8Rng, params: &ProfileParams) -> PreferenceProfile {
    let mut profile = PreferenceProfile::new(n);
    for i in 1..=n {
        let abstainer = rng.gen_bool(params.abstainer_prob);
        let mut others: Vec<Voter> = (1..=n).filter(|&j| j != i).collect();
        let size = rng.gen_range(0..=params.maxa_cap.min(n - 1));
        others.shuffle(rng);
        others.truncate(size);
        profile.set_reduced(i, abstainer, others).expect("distinct voters other than i");
    }
    profile
}

fn prufer_tree(n: usize, rng: &mut ChaCha8Rng) -> Vec<(Voter, Voter)> {
    if n < 2 {
        return Vec::new();
    }
    let code: Vec<Voter> = (0..n - 2).map(|_| rng.gen_range(1..=n)).collect();
    let mut degree = vec![1usize; n + 1];
    for &v in &code {
        degree[v] += 1;
    }
    let mut leaves: BTreeSet<Voter> = (1..=n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in &code {
        let leaf = leaves.pop_first().expect("a tree always has a leaf");
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.insert(v);
        }
    }
    let last: Vec<Voter> = leaves.into_iter().collect();
    edges.push((last[0], last[1]));
    edges
}
