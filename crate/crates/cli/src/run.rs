//! Command execution over a parsed instance file.

use std::collections::BTreeSet;

use divsys::{close_elimination, is_increasing, pdiff, pzero, DivSystem, VarPartition};
use ipgcd::{
    feasible, force_increasing, is_three_increasing, normalize, optimize, sign_split, to_triples, IpConfig, IpError,
    IpGcdInstance, SolveOutcome,
};
use local_global::{solve_increasing_auto, LgError};
use num_bigint::BigInt;
use num_traits::One;
use oracle::{best_in_window, enumerate_solutions, OracleError, Window};

use crate::parse::{DivFile, Parsed};
use crate::report::{Analysis, Report, Stats, Status, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Solve,
    Optimize,
    Analyze,
    /// Brute force over `[lo, hi]` in every coordinate.
    Oracle { lo: i128, hi: i128 },
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub config: IpConfig,
}

/// Exit status for a report: 0 answered, 1 infeasible on `check`, 2 error.
pub fn exit_code(cmd: Command, r: &Report) -> i32 {
    match (cmd, r.status) {
        (_, Status::Error) => 2,
        (Command::Check, Status::Infeasible) => 1,
        _ => 0,
    }
}

pub fn run(cmd: Command, input: &Parsed, opts: &Options) -> Report {
    match (cmd, input) {
        (Command::Oracle { lo, hi }, _) => run_oracle(input, lo, hi),
        (Command::Analyze, Parsed::Ip(inst)) => analyze_ip(inst, &opts.config),
        (Command::Analyze, Parsed::Div(d)) => analyze_div(d, &opts.config),
        (Command::Check | Command::Solve, Parsed::Ip(inst)) => solve_ip(cmd, inst, &opts.config),
        (Command::Optimize, Parsed::Ip(inst)) => optimize_ip(inst, &opts.config),
        (Command::Check | Command::Solve, Parsed::Div(d)) => solve_div(cmd, d, &opts.config),
        (Command::Optimize, Parsed::Div(_)) => Report::failure("optimize", "divisibility systems have no objective"),
    }
}

fn ip_stage(e: &IpError) -> &'static str {
    match e {
        IpError::DecompositionUnsupported(_) => "decomposition",
        IpError::SearchBudgetExceeded { stage, .. } | IpError::Solver { stage, .. } => stage,
        IpError::MemberCapExceeded(_) => "sign split",
        IpError::InvalidInstance(_) => "validation",
        IpError::NoObjective => "optimize",
        IpError::VerificationFailed => "verification",
        IpError::Num(_) => "number theory",
        IpError::Div(_) => "divisibility system",
    }
}

fn ip_failure(e: IpError) -> Report {
    Report::failure(ip_stage(&e), e)
}

fn witness(names: &[String], x: &[BigInt]) -> Witness {
    names.iter().cloned().zip(x.iter().map(|v| v.to_string())).collect()
}

fn solve_ip(cmd: Command, inst: &IpGcdInstance, cfg: &IpConfig) -> Report {
    let solved = match feasible(inst, cfg) {
        Ok(s) => s,
        Err(e) => return ip_failure(e),
    };
    let st = &solved.stats;
    let mut r = match solved.outcome {
        SolveOutcome::Feasible(x) => Report {
            witness: (cmd == Command::Solve).then(|| witness(&inst.names, &x)),
            ..Report::new(Status::Feasible)
        },
        _ => Report::new(Status::Infeasible),
    };
    r.stats = Stats::new(st.triples, st.mod_p_solutions, st.crt_steps);
    r
}

fn optimize_ip(inst: &IpGcdInstance, cfg: &IpConfig) -> Report {
    let solved = match optimize(inst, cfg) {
        Ok(s) => s,
        Err(e) => return ip_failure(e),
    };
    let st = &solved.stats;
    let mut r = match solved.outcome {
        SolveOutcome::Optimal(x, v) => Report {
            witness: Some(witness(&inst.names, &x)),
            objective_value: Some(v.to_string()),
            ..Report::new(Status::Optimal)
        },
        SolveOutcome::Unbounded => Report::new(Status::Unbounded),
        SolveOutcome::Feasible(_) | SolveOutcome::Infeasible => Report::new(Status::Infeasible),
    };
    r.stats = Stats::new(st.triples, st.mod_p_solutions, st.crt_steps);
    r
}

/// The file's partition, or one block per variable in declaration order.
fn partition_of(d: &DivFile) -> (VarPartition, bool) {
    match &d.partition {
        Some(blocks) => (VarPartition::new(blocks.clone()).expect("parser checks disjointness"), true),
        None => (VarPartition::new(d.system.vars().iter().map(|v| vec![*v]).collect()).expect("singletons"), false),
    }
}

fn partition_text(d: &DivFile, p: &VarPartition) -> String {
    p.blocks().iter().map(|b| b.iter().map(|v| d.names[*v].as_str()).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join(" | ")
}

fn lg_failure(e: LgError) -> Report {
    match e {
        LgError::NoModPSolution(p) => Report::failure(
            "solution modulo p search",
            format!("no solution modulo {p} among the residues searched; feasibility is undetermined"),
        ),
        LgError::SearchBudgetExceeded(_) => Report::failure("solution modulo p search", e),
        e => Report::failure("local-global", e),
    }
}

fn solve_div(cmd: Command, d: &DivFile, cfg: &IpConfig) -> Report {
    let (partition, _) = partition_of(d);
    if !is_increasing(&d.system, &partition) {
        return Report::failure(
            "increasing form",
            format!("the system is not increasing for the partition {}", partition_text(d, &partition)),
        );
    }
    let primes = match pdiff(&d.system, false) {
        Ok(p) => p.len(),
        Err(e) => return Report::failure("number theory", e),
    };
    match solve_increasing_auto(&d.system, &partition, &cfg.lg) {
        Ok(sol) => {
            let x: Vec<BigInt> = d.system.vars().iter().map(|v| sol.assignment.get(v).cloned().unwrap_or_else(BigInt::one)).collect();
            Report {
                witness: (cmd == Command::Solve).then(|| witness(&d.names, &x)),
                stats: Stats::new(0, primes, sol.stats.crt_steps),
                ..Report::new(Status::Feasible)
            }
        }
        Err(e) => lg_failure(e),
    }
}

fn strings(set: &BTreeSet<BigInt>) -> Vec<String> {
    set.iter().map(|p| p.to_string()).collect()
}

/// `pzero` of the elimination closure for the partition's order.
fn closed_pzero(phi: &DivSystem, partition: &VarPartition) -> Result<BTreeSet<BigInt>, Report> {
    let order = partition.order();
    pzero(&close_elimination(phi, &order), &order).map_err(|e| Report::failure("number theory", e))
}

fn analyze_div(d: &DivFile, _cfg: &IpConfig) -> Report {
    let (partition, given) = partition_of(d);
    let inc = is_increasing(&d.system, &partition);
    let run = || -> Result<Analysis, Report> {
        let pd = pdiff(&d.system, false).map_err(|e| Report::failure("number theory", e))?;
        let pz = closed_pzero(&d.system, &partition)?;
        let which = if given { "the given partition" } else { "the declaration order" };
        let verdict = if inc { "increasing" } else { "not increasing" };
        Ok(Analysis {
            members: "1".into(),
            triples: "0".into(),
            pdiff: strings(&pd),
            pzero: strings(&pz),
            increasing: inc,
            diagnosis: format!("{verdict} for {which} {}", partition_text(d, &partition)),
        })
    };
    match run() {
        Ok(a) => Report { analysis: Some(a), ..Report::new(Status::Analyzed) },
        Err(r) => r,
    }
}

fn analyze_ip(inst: &IpGcdInstance, cfg: &IpConfig) -> Report {
    let run = || -> Result<(Analysis, usize), Report> {
        inst.validate().map_err(ip_failure)?;
        let members = sign_split(&normalize(inst), cfg.max_members).map_err(ip_failure)?;
        let (mut pd, mut pz) = (BTreeSet::new(), BTreeSet::new());
        let (mut triples, mut good) = (0usize, 0usize);
        for m in &members {
            let ts = to_triples(m, cfg.decompose).and_then(|t| force_increasing(t, cfg.force_cap)).map_err(ip_failure)?;
            for t in &ts {
                triples += 1;
                good += usize::from(is_three_increasing(t));
                pd.extend(pdiff(&t.psi, false).map_err(|e| Report::failure("number theory", e))?);
                pz.extend(closed_pzero(&t.psi, &t.partition())?);
            }
        }
        let diagnosis = if good == triples {
            format!("all {triples} triples are increasing for the z | y | w partition")
        } else {
            format!("{} of {triples} triples are not increasing for the z | y | w partition", triples - good)
        };
        let a = Analysis {
            members: members.len().to_string(),
            triples: triples.to_string(),
            pdiff: strings(&pd),
            pzero: strings(&pz),
            increasing: good == triples,
            diagnosis,
        };
        Ok((a, triples))
    };
    match run() {
        Ok((a, n)) => Report { analysis: Some(a), stats: Stats::new(n, 0, 0), ..Report::new(Status::Analyzed) },
        Err(r) => r,
    }
}

fn oracle_failure(e: OracleError) -> Report {
    Report::failure("oracle", e)
}

fn run_oracle(input: &Parsed, lo: i128, hi: i128) -> Report {
    let names = input.names();
    let w = match Window::cube(names.len(), lo, hi) {
        Ok(w) => w,
        Err(e) => return oracle_failure(e),
    };
    let found = match input {
        Parsed::Ip(inst) => enumerate_solutions(inst, &w),
        Parsed::Div(d) => enumerate_solutions(&d.system, &w),
    };
    let sols = match found {
        Ok(s) => s,
        Err(e) => return oracle_failure(e),
    };
    let show = |x: &[i128]| -> Witness { names.iter().cloned().zip(x.iter().map(|v| v.to_string())).collect() };
    let mut r = Report::new(if sols.is_empty() { Status::Infeasible } else { Status::Feasible });
    r.witness = sols.first().map(|x| show(x));
    if let Parsed::Ip(inst) = input {
        if inst.objective.is_some() {
            match best_in_window(inst, &w) {
                Ok(best) => r.objective_value = best.map(|(_, v)| v.to_string()),
                Err(e) => return oracle_failure(e),
            }
        }
    }
    r.witnesses = Some(sols.iter().map(|x| show(x)).collect());
    r.stats = Stats::new(0, 0, w.volume());
    r
}
