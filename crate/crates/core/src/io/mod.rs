//! Text format for instances, the built-in catalog, random generators and
//! the key-value reports printed by the command-line tool.
//!
//! The format is line oriented and `#` starts a comment:
//!
//! ```text
//! voters 3
//! edge 1 2
//! pref 1 : 2
//! pref 2 abstainer : 1 3
//! full 3 : 1 3 2 0
//! deleg 1 2
//! token perm 3 1 2
//! ```
//!
//! `pref` gives Acc(i) in order; `full` gives a strict order over `0..=n`
//! in which `i` stands for voting. Voters without either line are
//! non-abstainers with an empty Acc. Missing `deleg` lines mean voting.

mod catalog;
mod generate;
pub mod report;

use std::fmt::Write as _;

use thiserror::Error;

use crate::dynamics::{TokenFunction, TokenKind};
use crate::model::{DelegationFunction, Instance, PreferenceProfile, SocialNetwork, Voter};

pub use catalog::{catalog, catalog_names, catalog_source, reference_trace, CatalogError};
pub use generate::{generate, GenerateError, GeneratorKind, ProfileParams};

/// Position and cause of a rejected line; `col` is 1-based and points at
/// the offending word.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// An instance together with the optional start state and token function
/// stored alongside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub delegation: Option<DelegationFunction>,
    pub token: Option<TokenFunction>,
}

impl From<Instance> for InstanceFile {
    fn from(instance: Instance) -> Self {
        InstanceFile {
            instance,
            delegation: None,
            token: None,
        }
    }
}

struct Word<'a> {
    text: &'a str,
    col: usize,
}

fn words(line: &str) -> Vec<Word<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, ch) in line.char_indices().chain([(line.len(), ' ')]) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(k),
            (true, Some(s)) => {
                out.push(Word {
                    text: &line[s..k],
                    col: line[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

enum Prefs {
    Reduced(bool, Vec<Voter>),
    Full(Vec<Voter>),
}

struct Parser {
    line: usize,
    n: Option<usize>,
    edges: Vec<(Voter, Voter)>,
    prefs: Vec<Option<Prefs>>,
    deleg: Vec<Option<Voter>>,
    token: Option<(TokenKind, Vec<Voter>, usize)>,
}

impl Parser {
    fn err(&self, col: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col,
            message: message.into(),
        }
    }

    fn number(&self, w: &Word) -> Result<usize, ParseError> {
        w.text
            .parse()
            .map_err(|_| self.err(w.col, format!("expected a number, found {:?}", w.text)))
    }

    fn voter(&self, w: &Word) -> Result<Voter, ParseError> {
        let n = self.n.expect("checked by caller");
        let v = self.number(w)?;
        if v == 0 || v > n {
            return Err(self.err(w.col, format!("voter {v} is outside 1..={n}")));
        }
        Ok(v)
    }

    fn voter_or_zero(&self, w: &Word) -> Result<Voter, ParseError> {
        let n = self.n.expect("checked by caller");
        let v = self.number(w)?;
        if v > n {
            return Err(self.err(w.col, format!("{v} is outside 0..={n}")));
        }
        Ok(v)
    }

    fn arity(&self, ws: &[Word], expected: usize, usage: &str) -> Result<(), ParseError> {
        if ws.len() != expected {
            let col = ws.get(expected).or(ws.last()).map_or(1, |w| w.col);
            return Err(self.err(col, format!("expected `{usage}`")));
        }
        Ok(())
    }

    // splits `head : tail` and returns the index of the colon
    fn colon(&self, ws: &[Word], usage: &str) -> Result<usize, ParseError> {
        ws.iter()
            .position(|w| w.text == ":")
            .ok_or_else(|| self.err(ws[0].col, format!("expected `{usage}`")))
    }

    fn directive(&mut self, ws: &[Word]) -> Result<(), ParseError> {
        let head = &ws[0];
        if head.text == "voters" {
            if self.n.is_some() {
                return Err(self.err(head.col, "`voters` given twice"));
            }
            self.arity(ws, 2, "voters <n>")?;
            let n = self.number(&ws[1])?;
            if n == 0 {
                return Err(self.err(ws[1].col, "at least one voter is required"));
            }
            self.n = Some(n);
            self.prefs = (0..=n).map(|_| None).collect();
            self.deleg = vec![None; n + 1];
            return Ok(());
        }
        if self.n.is_none() {
            return Err(self.err(head.col, format!("`{}` before `voters`", head.text)));
        }
        match head.text {
            "edge" => {
                self.arity(ws, 3, "edge <i> <j>")?;
                let (i, j) = (self.voter(&ws[1])?, self.voter(&ws[2])?);
                if i == j {
                    return Err(self.err(ws[2].col, format!("self-loop on voter {i}")));
                }
                let key = (i.min(j), i.max(j));
                if self.edges.contains(&key) {
                    return Err(self.err(head.col, format!("duplicate edge {i} {j}")));
                }
                self.edges.push(key);
            }
            "pref" => {
                let usage = "pref <i> [abstainer] : <j1> <j2> ...";
                let c = self.colon(ws, usage)?;
                let abstainer = match &ws[1..c] {
                    [_] => false,
                    [_, flag] if flag.text == "abstainer" => true,
                    [_, flag] => return Err(self.err(flag.col, format!("expected `abstainer`, found {:?}", flag.text))),
                    _ => return Err(self.err(head.col, format!("expected `{usage}`"))),
                };
                let i = self.voter(&ws[1])?;
                let mut acc = Vec::new();
                for w in &ws[c + 1..] {
                    let j = self.voter_or_zero(w)?;
                    if j == 0 || j == i {
                        return Err(self.err(w.col, format!("Acc({i}) cannot contain {j}")));
                    }
                    if acc.contains(&j) {
                        return Err(self.err(w.col, format!("{j} listed twice in Acc({i})")));
                    }
                    acc.push(j);
                }
                self.set_prefs(i, head.col, Prefs::Reduced(abstainer, acc))?;
            }
            "full" => {
                let usage = "full <i> : <order of 0..n>";
                let c = self.colon(ws, usage)?;
                if c != 2 {
                    return Err(self.err(head.col, format!("expected `{usage}`")));
                }
                let i = self.voter(&ws[1])?;
                let n = self.n.unwrap_or_default();
                let mut order = Vec::new();
                for w in &ws[c + 1..] {
                    let j = self.voter_or_zero(w)?;
                    if order.contains(&j) {
                        return Err(self.err(w.col, format!("{j} listed twice")));
                    }
                    order.push(j);
                }
                if order.len() != n + 1 {
                    let col = ws.last().map_or(head.col, |w| w.col);
                    return Err(self.err(col, format!("a full order lists all of 0..={n}")));
                }
                self.set_prefs(i, head.col, Prefs::Full(order))?;
            }
            "deleg" => {
                self.arity(ws, 3, "deleg <i> <j>")?;
                let i = self.voter(&ws[1])?;
                let j = self.voter_or_zero(&ws[2])?;
                if self.deleg[i].replace(j).is_some() {
                    return Err(self.err(head.col, format!("duplicate deleg for voter {i}")));
                }
            }
            "token" => {
                if self.token.is_some() {
                    return Err(self.err(head.col, "`token` given twice"));
                }
                let kind = match ws.get(1).map(|w| w.text) {
                    Some("perm") => TokenKind::Permutation,
                    Some("seq") => TokenKind::Sequence,
                    _ => {
                        let col = ws.get(1).map_or(head.col, |w| w.col);
                        return Err(self.err(col, "expected `token perm <σ...>` or `token seq <...>`"));
                    }
                };
                let seq = ws[2..].iter().map(|w| self.voter(w)).collect::<Result<_, _>>()?;
                self.token = Some((kind, seq, self.line));
            }
            other => return Err(self.err(head.col, format!("unknown directive {other:?}"))),
        }
        Ok(())
    }

    fn set_prefs(&mut self, i: Voter, col: usize, p: Prefs) -> Result<(), ParseError> {
        if self.prefs[i].is_some() {
            return Err(self.err(col, format!("duplicate preferences for voter {i}")));
        }
        self.prefs[i] = Some(p);
        Ok(())
    }
}

/// Parses the text format.
pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let mut p = Parser {
        line: 0,
        n: None,
        edges: Vec::new(),
        prefs: Vec::new(),
        deleg: Vec::new(),
        token: None,
    };
    for (k, raw) in text.lines().enumerate() {
        p.line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let ws = words(content);
        if !ws.is_empty() {
            p.directive(&ws)?;
        }
    }
    let at_end = |message: String| ParseError {
        line: text.lines().count().max(1),
        col: 1,
        message,
    };
    let n = p.n.ok_or_else(|| at_end("missing `voters` line".into()))?;
    let network = SocialNetwork::new(n, p.edges.iter().copied()).map_err(|e| at_end(e.to_string()))?;
    let mut profile = PreferenceProfile::new(n);
    for i in 1..=n {
        let result = match p.prefs[i].take() {
            Some(Prefs::Reduced(abstainer, acc)) => profile.set_reduced(i, abstainer, acc),
            Some(Prefs::Full(order)) => profile.set_full_order(i, order),
            None => Ok(()),
        };
        result.map_err(|e| at_end(e.to_string()))?;
    }
    let instance = Instance::new(network, profile).map_err(|e| at_end(e.to_string()))?;
    let delegation = if p.deleg.iter().any(Option::is_some) {
        let choices = (1..=n).map(|i| p.deleg[i].unwrap_or(i)).collect();
        Some(DelegationFunction::new(instance.network(), choices).map_err(|e| at_end(e.to_string()))?)
    } else {
        None
    };
    let token = match p.token {
        Some((kind, seq, line)) => {
            let built = match kind {
                TokenKind::Permutation => TokenFunction::permutation(n, seq),
                TokenKind::Sequence => TokenFunction::sequence(n, seq),
            };
            Some(built.map_err(|e| ParseError {
                line,
                col: 1,
                message: e.to_string(),
            })?)
        }
        None => None,
    };
    Ok(InstanceFile {
        instance,
        delegation,
        token,
    })
}

/// Canonical text: `voters`, sorted edges, one preference line per voter
/// that needs one, then `deleg` lines for every voter and the token.
pub fn serialize_instance(file: &InstanceFile) -> String {
    let inst = &file.instance;
    let n = inst.n();
    let mut out = format!("voters {n}\n");
    for (i, j) in inst.network().edges() {
        let _ = writeln!(out, "edge {i} {j}");
    }
    let profile = inst.profile();
    for i in 1..=n {
        let prefs = profile.voter(i);
        if let Some(order) = prefs.full_order() {
            let _ = writeln!(out, "full {i} : {}", join(order));
        } else if prefs.is_abstainer() || !prefs.acceptable().is_empty() {
            let flag = if prefs.is_abstainer() { " abstainer" } else { "" };
            let _ = writeln!(out, "pref {i}{flag} : {}", join(prefs.acceptable()));
        }
    }
    if let Some(d) = &file.delegation {
        for i in 1..=n {
            let _ = writeln!(out, "deleg {i} {}", d.get(i));
        }
    }
    if let Some(token) = &file.token {
        let kind = match token.kind() {
            TokenKind::Permutation => "perm",
            TokenKind::Sequence => "seq",
        };
        let _ = writeln!(out, "token {kind} {}", join(token.order()));
    }
    out.lines().map(str::trim_end).fold(String::new(), |mut acc, l| {
        acc.push_str(l);
        acc.push('\n');
        acc
    })
}

fn join(xs: &[Voter]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}
