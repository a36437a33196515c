use super::{ModelError, Voter, ABSTAIN};

/// Preferences of a single voter over possible gurus.
///
/// `acceptable` is Acc(i) in decreasing order of preference. When a strict
/// total order over all voters and abstention is known it is kept in
/// `full_order`, and `acceptable`/`abstainer` are derived from it.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VoterPreferences {
    abstainer: bool,
    acceptable: Vec<Voter>,
    full_order: Option<Vec<Voter>>,
    // position (0-based) of each element of 0..=n in full_order
    positions: Option<Vec<usize>>,
}

impl VoterPreferences {
    pub fn is_abstainer(&self) -> bool {
        self.abstainer
    }

    pub fn acceptable(&self) -> &[Voter] {
        &self.acceptable
    }

    pub fn full_order(&self) -> Option<&[Voter]> {
        self.full_order.as_deref()
    }
}

/// The preference profile `P`: one [`VoterPreferences`] per voter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferenceProfile {
    prefs: Vec<VoterPreferences>,
}

impl PreferenceProfile {
    /// Every voter is a non-abstainer with an empty acceptability set.
    pub fn new(n: usize) -> Self {
        PreferenceProfile {
            prefs: vec![VoterPreferences::default(); n],
        }
    }

    /// Builds a reduced profile from `(abstainer, Acc)` pairs for voters `1..=n`.
    pub fn from_lists<I>(lists: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (bool, Vec<Voter>)>,
    {
        let lists: Vec<_> = lists.into_iter().collect();
        let mut profile = Self::new(lists.len());
        for (idx, (abstainer, acc)) in lists.into_iter().enumerate() {
            profile.set_reduced(idx + 1, abstainer, acc)?;
        }
        Ok(profile)
    }

    /// Builds a profile from full orders over `0..=n`, one per voter.
    pub fn from_full_orders<I>(orders: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = Vec<Voter>>,
    {
        let orders: Vec<_> = orders.into_iter().collect();
        let mut profile = Self::new(orders.len());
        for (idx, order) in orders.into_iter().enumerate() {
            profile.set_full_order(idx + 1, order)?;
        }
        Ok(profile)
    }

    pub fn n(&self) -> usize {
        self.prefs.len()
    }

    fn check_voter(&self, i: Voter) -> Result<(), ModelError> {
        if i == 0 || i > self.n() {
            Err(ModelError::VoterOutOfRange { voter: i, n: self.n() })
        } else {
            Ok(())
        }
    }

    /// Sets the reduced preferences of voter `i`, discarding any full order.
    pub fn set_reduced(
        &mut self,
        i: Voter,
        abstainer: bool,
        acceptable: Vec<Voter>,
    ) -> Result<(), ModelError> {
        self.check_voter(i)?;
        let n = self.n();
        let mut seen = vec![false; n + 1];
        for &j in &acceptable {
            if j == 0 || j == i || j > n {
                return Err(ModelError::InvalidAcceptable { voter: i, entry: j });
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(ModelError::DuplicateAcceptable { voter: i, entry: j });
            }
        }
        self.prefs[i - 1] = VoterPreferences {
            abstainer,
            acceptable,
            full_order: None,
            positions: None,
        };
        Ok(())
    }

    /// Sets a strict total order over `0..=n` (most preferred first) for voter `i`.
    pub fn set_full_order(&mut self, i: Voter, order: Vec<Voter>) -> Result<(), ModelError> {
        self.check_voter(i)?;
        let n = self.n();
        if order.len() != n + 1 {
            return Err(ModelError::InvalidFullOrder {
                voter: i,
                reason: format!("expected {} entries, found {}", n + 1, order.len()),
            });
        }
        let mut positions = vec![usize::MAX; n + 1];
        for (pos, &g) in order.iter().enumerate() {
            if g > n {
                return Err(ModelError::InvalidFullOrder {
                    voter: i,
                    reason: format!("entry {g} out of range"),
                });
            }
            if positions[g] != usize::MAX {
                return Err(ModelError::InvalidFullOrder {
                    voter: i,
                    reason: format!("entry {g} repeated"),
                });
            }
            positions[g] = pos;
        }
        let cutoff = positions[i].min(positions[ABSTAIN]);
        let acceptable = order[..cutoff].to_vec();
        self.prefs[i - 1] = VoterPreferences {
            abstainer: positions[ABSTAIN] < positions[i],
            acceptable,
            full_order: Some(order),
            positions: Some(positions),
        };
        Ok(())
    }

    pub fn voter(&self, i: Voter) -> &VoterPreferences {
        &self.prefs[i - 1]
    }

    pub fn is_abstainer(&self, i: Voter) -> bool {
        self.prefs[i - 1].abstainer
    }

    /// Acc(i), most preferred first.
    pub fn acceptable(&self, i: Voter) -> &[Voter] {
        &self.prefs[i - 1].acceptable
    }

    pub fn accepts(&self, i: Voter, j: Voter) -> bool {
        self.acceptable(i).contains(&j)
    }

    /// maxa: the largest acceptability set.
    pub fn maxa(&self) -> usize {
        self.prefs.iter().map(|p| p.acceptable.len()).max().unwrap_or(0)
    }

    pub fn has_full_orders(&self) -> bool {
        self.prefs.iter().all(|p| p.full_order.is_some())
    }

    /// 1-based rank of guru `g` (a voter or 0) in the order of voter `i`.
    ///
    /// Without a full order the canonical completion is used: Acc(i) first,
    /// then voting and abstaining in the voter's order, then every other
    /// voter tied at the bottom.
    pub fn rank(&self, i: Voter, g: Voter) -> usize {
        let p = &self.prefs[i - 1];
        if let Some(positions) = &p.positions {
            return positions[g] + 1;
        }
        if let Some(pos) = p.acceptable.iter().position(|&a| a == g) {
            return pos + 1;
        }
        let k = p.acceptable.len();
        match (g == i, g == ABSTAIN, p.abstainer) {
            (true, _, false) | (_, true, true) => k + 1,
            (true, _, true) | (_, true, false) => k + 2,
            _ => k + 3,
        }
    }

    /// `a ≻_i b`.
    pub fn prefers(&self, i: Voter, a: Voter, b: Voter) -> bool {
        self.rank(i, a) < self.rank(i, b)
    }

    /// Most preferred element of `candidates` for voter `i`; ties keep the
    /// first candidate.
    pub fn best_of<I>(&self, i: Voter, candidates: I) -> Option<Voter>
    where
        I: IntoIterator<Item = Voter>,
    {
        candidates
            .into_iter()
            .fold(None, |best: Option<Voter>, g| match best {
                Some(b) if self.rank(i, b) <= self.rank(i, g) => Some(b),
                _ => Some(g),
            })
    }
}
