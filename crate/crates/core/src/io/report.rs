//! Line-oriented `key value` reports.
//!
//! Every report starts with `format 1`. Keys used by the tool:
//!
//! | key | meaning |
//! |-----|---------|
//! | `command` | subcommand that produced the report |
//! | `method` | solver actually used (`brute`, `kernel`, `tree`, `star`) |
//! | `answer` | `yes`, `no`, `unknown`, `optimal`, `infeasible`, `converged`, `cycle`, `budget`, `converges-always`, `diverges` |
//! | `value` | optimal objective value |
//! | `witness` | a delegation function as `(d(1),...,d(n))` |
//! | `gurus` | guru of each voter, same layout |
//! | `dissatisfaction`, `max_voting_power`, `abstention` | measures of the witness |
//! | `time_ms` | wall time, the only field that varies between runs |
//!
//! Dynamics reports add `steps`, `t_star`, `cycle_first`, `cycle_second`,
//! `period` and `final`.

use std::fmt::{self, Display};

use crate::model::{measures, resolve_gurus, DelegationFunction, Instance};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    fields: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: &str, value: impl Display) -> &mut Self {
        debug_assert!(!key.contains(char::is_whitespace));
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    /// Witness, guru vector and measures of `d`.
    pub fn push_delegation(&mut self, instance: &Instance, d: &DelegationFunction) -> &mut Self {
        let gurus = resolve_gurus(d);
        let m = measures(instance, d);
        let gu: Vec<String> = gurus.gurus_by_voter().iter().map(ToString::to_string).collect();
        self.push("witness", d)
            .push("gurus", format!("({})", gu.join(",")))
            .push("dissatisfaction", m.dissatisfaction)
            .push("max_voting_power", m.max_voting_power)
            .push("abstention", m.abstention_count)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn fields(&self) -> &[(String, String)] {
        &self.fields
    }

    /// Reads back a rendered report.
    pub fn parse(text: &str) -> Option<Report> {
        let mut lines = text.lines();
        if lines.next()? != format!("format {FORMAT_VERSION}") {
            return None;
        }
        let mut fields = Vec::new();
        for line in lines {
            let (k, v) = line.split_once(' ').unwrap_or((line, ""));
            fields.push((k.to_string(), v.to_string()));
        }
        Some(Report { fields })
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "format {FORMAT_VERSION}")?;
        for (k, v) in &self.fields {
            writeln!(f, "{k} {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{PreferenceProfile, SocialNetwork};

    #[test]
    fn render_and_parse() {
        let inst = Instance::new(SocialNetwork::path(2), PreferenceProfile::from_lists([(false, vec![2]), (false, vec![])]).unwrap()).unwrap();
        let d = DelegationFunction::new(inst.network(), vec![2, 2]).unwrap();
        let mut r = Report::new("solve-ex");
        r.push("answer", "yes").push_delegation(&inst, &d);
        let text = r.to_string();
        assert!(text.starts_with("format 1\ncommand solve-ex\nanswer yes\nwitness (2,2)\ngurus (2,2)\n"));
        assert_eq!(Report::parse(&text), Some(r.clone()));
        assert_eq!(r.get("max_voting_power"), Some("2"));
        assert_eq!(Report::parse("format 2\n"), None);
    }
}
