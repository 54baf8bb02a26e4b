//! Acceptance criteria, each checked against brute-force enumeration or an
//! independent computation on a seeded corpus.

pub mod crt;
pub mod gen;
pub mod programs;
pub mod systems;

use std::fmt;

/// Outcome of one criterion.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub pass: bool,
    pub summary: String,
    pub failures: Vec<String>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", if self.pass { "PASS" } else { "FAIL" }, self.summary)
    }
}

/// Counts checks and collects failure descriptions.
#[derive(Default)]
pub struct Tally {
    pub checked: usize,
    failures: Vec<String>,
}

impl Tally {
    pub fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    pub fn ensure(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.fail(msg());
        }
    }

    pub fn verdict(self, summary: impl Into<String>) -> Verdict {
        let summary = summary.into();
        let summary = if self.failures.is_empty() { summary } else { format!("{summary}; {} failures", self.failures.len()) };
        Verdict { pass: self.failures.is_empty(), summary, failures: self.failures }
    }
}

pub type Criterion = (u8, &'static str, fn() -> Verdict);

/// All criteria in order.
pub fn criteria() -> Vec<Criterion> {
    vec![
        (1, "feasibility agrees with enumeration", programs::feasibility),
        (2, "optimization agrees with enumeration", programs::optimization),
        (3, "mixed congruence systems", crt::mixed_crt),
        (4, "doubly exponential chain", systems::chain_family),
        (5, "elimination closure", systems::elimination_closure),
        (6, "module spans", systems::module_spans),
        (7, "local-to-global solutions verify", systems::local_global),
        (8, "triple solutions modulo p", programs::triple_mod_p),
        (9, "easy-prime solutions", systems::easy_primes),
        (10, "shifted-cone decomposition", programs::decomposition),
    ]
}
