//! The structured result of one command.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Feasible,
    Infeasible,
    Optimal,
    Unbounded,
    Analyzed,
    Error,
}

/// Work counters; integers are decimal strings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub triples: String,
    pub primes: String,
    pub scan_steps: String,
}

impl Stats {
    pub fn new(triples: impl ToString, primes: impl ToString, scan_steps: impl ToString) -> Self {
        Stats { triples: triples.to_string(), primes: primes.to_string(), scan_steps: scan_steps.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub members: String,
    pub triples: String,
    pub pdiff: Vec<String>,
    pub pzero: Vec<String>,
    pub increasing: bool,
    pub diagnosis: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub stage: String,
    pub message: String,
}

pub type Witness = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub status: Status,
    pub witness: Option<Witness>,
    pub objective_value: Option<String>,
    pub stats: Stats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Witness>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<Analysis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Failure>,
}

impl Report {
    pub fn new(status: Status) -> Self {
        Report {
            status,
            witness: None,
            objective_value: None,
            stats: Stats::new(0, 0, 0),
            witnesses: None,
            analysis: None,
            error: None,
        }
    }

    pub fn failure(stage: impl Into<String>, message: impl ToString) -> Self {
        Report { error: Some(Failure { stage: stage.into(), message: message.to_string() }), ..Report::new(Status::Error) }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let show = |w: &Witness| w.iter().map(|(k, v)| format!("{k} = {v}")).collect::<Vec<_>>().join(", ");
        writeln!(s, "status: {:?}", self.status).unwrap();
        if let Some(e) = &self.error {
            writeln!(s, "error ({}): {}", e.stage, e.message).unwrap();
        }
        if let Some(w) = &self.witness {
            writeln!(s, "witness: {}", show(w)).unwrap();
        }
        if let Some(v) = &self.objective_value {
            writeln!(s, "objective: {v}").unwrap();
        }
        if let Some(ws) = &self.witnesses {
            writeln!(s, "solutions in window: {}", ws.len()).unwrap();
            for w in ws {
                writeln!(s, "  {}", show(w)).unwrap();
            }
        }
        if let Some(a) = &self.analysis {
            writeln!(s, "members: {}", a.members).unwrap();
            writeln!(s, "triples: {}", a.triples).unwrap();
            writeln!(s, "pdiff: {{{}}}", a.pdiff.join(", ")).unwrap();
            writeln!(s, "pzero: {{{}}}", a.pzero.join(", ")).unwrap();
            writeln!(s, "increasing: {}", a.diagnosis).unwrap();
        }
        let st = &self.stats;
        writeln!(s, "stats: triples {}, primes {}, scan steps {}", st.triples, st.primes, st.scan_steps).unwrap();
        s
    }
}
