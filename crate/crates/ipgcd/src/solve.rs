//! Feasibility and optimization drivers.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use divsys::{pdiff, Assignment, LinearPoly};
use local_global::{solve_increasing, LgConfig, ModSolutions};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::error::IpError;
use crate::instance::{Inequality, IpGcdInstance, Sense};
use crate::modp::solve_triple_mod_p;
use crate::normalize::{normalize, sign_split};
use crate::triples::{force_increasing, to_triples, GcdToDivTriple};
use crate::vzgs::DecomposeConfig;

#[derive(Clone, Debug)]
pub struct IpConfig {
    /// Largest number of sign-split members.
    pub max_members: usize,
    pub decompose: DecomposeConfig,
    pub lg: LgConfig,
    /// Largest residue space searched for one triple and prime.
    pub mod_p_cap: u64,
    /// Largest number of assignments tried in one increasing-form split.
    pub force_cap: u64,
    /// Evaluate members on the rayon pool. The reported witness does not
    /// depend on this flag.
    pub parallel: bool,
}

impl Default for IpConfig {
    fn default() -> Self {
        IpConfig {
            max_members: 100_000,
            decompose: DecomposeConfig::default(),
            lg: LgConfig::default(),
            mod_p_cap: 1_000_000,
            force_cap: 1_000_000,
            parallel: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Infeasible,
    Feasible(Vec<BigInt>),
    Optimal(Vec<BigInt>, BigInt),
    Unbounded,
}

/// Work counters. With `parallel` set, members past the first witness may
/// or may not be counted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub members: usize,
    pub triples: usize,
    pub mod_p_solutions: usize,
    pub local_global_calls: usize,
    pub local_global_rounds: usize,
    pub verification_failures: usize,
    pub feasibility_probes: usize,
    /// Candidates scanned by the mixed CRT solver.
    pub crt_steps: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solved {
    pub outcome: SolveOutcome,
    pub stats: SolveStats,
}

#[derive(Default)]
struct Counters {
    members: AtomicUsize,
    triples: AtomicUsize,
    mod_p: AtomicUsize,
    lg_calls: AtomicUsize,
    lg_rounds: AtomicUsize,
    failures: AtomicUsize,
    probes: AtomicUsize,
    crt_steps: AtomicU64,
}

impl Counters {
    fn bump(c: &AtomicUsize, n: usize) {
        c.fetch_add(n, Ordering::Relaxed);
    }

    fn snapshot(&self) -> SolveStats {
        let g = |c: &AtomicUsize| c.load(Ordering::Relaxed);
        SolveStats {
            members: g(&self.members),
            triples: g(&self.triples),
            mod_p_solutions: g(&self.mod_p),
            local_global_calls: g(&self.lg_calls),
            local_global_rounds: g(&self.lg_rounds),
            verification_failures: g(&self.failures),
            feasibility_probes: g(&self.probes),
            crt_steps: self.crt_steps.load(Ordering::Relaxed),
        }
    }
}

/// A natural-number solution of `t.psi`, or `None` if some prime has no
/// solution modulo it.
fn solve_triple(t: &GcdToDivTriple, cfg: &IpConfig, counters: &Counters) -> Result<Option<Assignment>, IpError> {
    if t.psi.is_empty() {
        return Ok(Some(Assignment::new()));
    }
    let mut mods = ModSolutions::new();
    for p in pdiff(&t.psi, false)? {
        match solve_triple_mod_p(t, &p, cfg.mod_p_cap)? {
            Some(s) => {
                Counters::bump(&counters.mod_p, 1);
                mods.insert(p, s);
            }
            None => return Ok(None),
        }
    }
    Counters::bump(&counters.lg_calls, 1);
    let sol = solve_increasing(&t.psi, &t.partition(), &mods, &cfg.lg)
        .map_err(|source| IpError::Solver { stage: "local-global", source })?;
    Counters::bump(&counters.lg_rounds, sol.stats.rounds);
    counters.crt_steps.fetch_add(sol.stats.crt_steps, Ordering::Relaxed);
    Ok(Some(sol.assignment))
}

struct TripleResult {
    triple: GcdToDivTriple,
    /// A verified witness over the original variables.
    witness: Option<Vec<BigInt>>,
}

/// Triples of one member, solved in order; stops after the first verified
/// witness when `first_only` is set.
fn member_results(
    orig: &IpGcdInstance,
    member: &IpGcdInstance,
    cfg: &IpConfig,
    counters: &Counters,
    first_only: bool,
) -> Result<Vec<TripleResult>, IpError> {
    Counters::bump(&counters.members, 1);
    let triples = force_increasing(to_triples(member, cfg.decompose)?, cfg.force_cap)?;
    Counters::bump(&counters.triples, triples.len());
    let n = orig.num_vars();
    let mut out = Vec::new();
    for triple in triples {
        let witness = match solve_triple(&triple, cfg, counters)? {
            None => None,
            Some(lambda) => {
                let x: Vec<BigInt> = triple.point(&lambda).into_iter().take(n).collect();
                if orig.is_satisfied_by(&x) {
                    Some(x)
                } else {
                    Counters::bump(&counters.failures, 1);
                    None
                }
            }
        };
        let found = witness.is_some();
        out.push(TripleResult { triple, witness });
        if found && first_only {
            break;
        }
    }
    Ok(out)
}

fn members(inst: &IpGcdInstance, cfg: &IpConfig) -> Result<Vec<IpGcdInstance>, IpError> {
    inst.validate()?;
    sign_split(&normalize(inst), cfg.max_members)
}

fn first_witness(inst: &IpGcdInstance, cfg: &IpConfig, counters: &Counters) -> Result<Option<Vec<BigInt>>, IpError> {
    Counters::bump(&counters.probes, 1);
    let ms = members(inst, cfg)?;
    let per_member = |m: &IpGcdInstance| -> Option<Result<Vec<BigInt>, IpError>> {
        match member_results(inst, m, cfg, counters, true) {
            Ok(rs) => rs.into_iter().find_map(|r| r.witness).map(Ok),
            Err(e) => Some(Err(e)),
        }
    };
    let found = if cfg.parallel { ms.par_iter().find_map_first(per_member) } else { ms.iter().find_map(per_member) };
    found.transpose()
}

/// Decides feasibility, returning a witness verified on `inst`.
pub fn feasible(inst: &IpGcdInstance, cfg: &IpConfig) -> Result<Solved, IpError> {
    let counters = Counters::default();
    let outcome = match first_witness(inst, cfg, &counters)? {
        Some(x) => SolveOutcome::Feasible(x),
        None => SolveOutcome::Infeasible,
    };
    Ok(Solved { outcome, stats: counters.snapshot() })
}

/// Minimizes or maximizes the objective of `inst`.
pub fn optimize(inst: &IpGcdInstance, cfg: &IpConfig) -> Result<Solved, IpError> {
    let obj = inst.objective.as_ref().ok_or(IpError::NoObjective)?;
    // minimize `cost`
    let cost = match obj.sense {
        Sense::Minimize => obj.poly.clone(),
        Sense::Maximize => obj.poly.neg(),
    };
    let counters = Counters::default();
    Counters::bump(&counters.probes, 1);
    let ms = members(inst, cfg)?;
    let results: Vec<Result<Vec<TripleResult>, IpError>> = if cfg.parallel {
        ms.par_iter().map(|m| member_results(inst, m, cfg, &counters, false)).collect()
    } else {
        ms.iter().map(|m| member_results(inst, m, cfg, &counters, false)).collect()
    };
    let mut lower: Option<BigInt> = None;
    let mut best: Option<(BigInt, Vec<BigInt>)> = None;
    for rs in results {
        for r in rs? {
            let Some(x) = r.witness else { continue };
            let width = r.triple.u.len();
            let c: Vec<BigInt> = (0..width).map(|v| cost.coeff(v)).collect();
            if r.triple.pushed_objective(&c).values().any(|a| a.is_negative()) {
                return Ok(Solved { outcome: SolveOutcome::Unbounded, stats: counters.snapshot() });
            }
            let at_u = cost.eval(&to_assignment(&r.triple.u));
            if lower.as_ref().is_none_or(|l| at_u < *l) {
                lower = Some(at_u);
            }
            let value = cost.eval(&to_assignment(&x));
            if best.as_ref().is_none_or(|(b, _)| value < *b) {
                best = Some((value, x));
            }
        }
    }
    let (Some(mut lo), Some((mut hi, mut x))) = (lower, best) else {
        return Ok(Solved { outcome: SolveOutcome::Infeasible, stats: counters.snapshot() });
    };
    while lo < hi {
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        let mut probe = inst.clone();
        probe.objective = None;
        probe.rows.push(Inequality::le(&cost, &LinearPoly::constant(mid.clone())));
        match first_witness(&probe, cfg, &counters)? {
            Some(y) => {
                hi = cost.eval(&to_assignment(&y));
                x = y;
            }
            None => lo = mid + BigInt::one(),
        }
    }
    let value = obj.poly.eval(&to_assignment(&x));
    Ok(Solved { outcome: SolveOutcome::Optimal(x, value), stats: counters.snapshot() })
}

fn to_assignment(x: &[BigInt]) -> Assignment {
    x.iter().cloned().enumerate().collect()
}
