use thiserror::Error;

use super::{parse_instance, InstanceFile};
use crate::model::Voter;

const ENTRIES: [(&str, &str); 7] = [
    ("ex1", include_str!("../../catalog/ex1.ldg")),
    ("threecycle", include_str!("../../catalog/threecycle.ldg")),
    ("fig2", include_str!("../../catalog/fig2.ldg")),
    ("thm12", include_str!("../../catalog/thm12.ldg")),
    ("thm13", include_str!("../../catalog/thm13.ldg")),
    ("thm15", include_str!("../../catalog/thm15.ldg")),
    ("thm16", include_str!("../../catalog/thm16.ldg")),
];

// BRD from all-vote under 4,3,1,2; rounds 2 and 5 end in the same state
const THM12_TRACE: [(Voter, Voter); 20] = [
    (4, 3), (3, 2), (1, 2), (2, 2),
    (4, 4), (3, 2), (1, 2), (2, 4),
    (4, 4), (3, 3), (1, 1), (2, 3),
    (4, 3), (3, 1), (1, 1), (2, 2),
    (4, 4), (3, 2), (1, 2), (2, 4),
];

// BRD from all-vote; d_5 = d_19 with everybody following voter 5
const THM15_TRACE: [(Voter, Voter); 19] = [
    (3, 4), (4, 5), (5, 5), (2, 3), (1, 2),
    (3, 3), (2, 2), (1, 1), (3, 2), (2, 1), (4, 3), (5, 4),
    (3, 3), (4, 4), (5, 5), (3, 4), (4, 5), (2, 3), (1, 2),
];

// IRD from all-vote; d_11 = d_1
const THM16_TRACE: [(Voter, Voter); 11] = [
    (1, 2), (2, 3), (1, 1), (3, 0), (2, 2), (3, 2), (2, 1), (3, 3), (1, 0), (2, 2), (1, 2),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown catalog entry {name:?}; available: {}", catalog_names().collect::<Vec<_>>().join(", "))]
pub struct CatalogError {
    pub name: String,
}

pub fn catalog_names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|&(name, _)| name)
}

/// The file text behind a catalog entry, comments included.
pub fn catalog_source(name: &str) -> Result<&'static str, CatalogError> {
    ENTRIES
        .iter()
        .find(|&&(n, _)| n == name)
        .map(|&(_, text)| text)
        .ok_or_else(|| CatalogError { name: name.to_string() })
}

pub fn catalog(name: &str) -> Result<InstanceFile, CatalogError> {
    let text = catalog_source(name)?;
    Ok(parse_instance(text).expect("catalog files parse"))
}

/// The scripted `(voter, target)` run recorded for a dynamics entry, played
/// from all-vote.
pub fn reference_trace(name: &str) -> Option<&'static [(Voter, Voter)]> {
    match name {
        "thm12" => Some(&THM12_TRACE),
        "thm15" => Some(&THM15_TRACE),
        "thm16" => Some(&THM16_TRACE),
        _ => None,
    }
}
