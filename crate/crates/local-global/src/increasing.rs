//! Integer solutions of increasing systems, one block of variables at a
//! time.
//!
//! Each round fixes the first block by mixed CRT calls: congruences lift the
//! supplied solutions modulo the difficult primes, non-congruences keep the
//! values of the relevant S-terms free of unwanted common factors. The rest
//! of the system is then solved recursively after substitution, with
//! solutions modulo its new difficult primes built from the first block.

use std::collections::{BTreeMap, BTreeSet};

use divsys::{
    close_elimination, delta, is_increasing, module_span, pdiff, pzero, s_closure, s_polynomial, sterms, Assignment,
    DivSystem, LinearPoly, Var, VarOrder, VarPartition,
};
use int_linalg::min_positive_multiplier;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use numthy::{crt_combine, factorize_with, next_prime, solve_mixed_crt_counted, vp, CongruenceSystem, FactorBudget};

use crate::error::LgError;
use crate::modp::{extend_avoiding_lhs_roots, find_mod_p_solution, root_residue, smallest_free, ModPSolution};

/// Solutions modulo primes, keyed by the prime.
pub type ModSolutions = BTreeMap<BigInt, ModPSolution>;

/// Tuning knobs for [`solve_increasing`].
#[derive(Clone, Debug)]
pub struct LgConfig {
    pub factor_budget: FactorBudget,
    /// Candidates tried per variable when a factorization gave up and the
    /// gcd conditions are checked directly instead.
    pub fallback_scan: u64,
    /// Residue tuples allowed in an exhaustive search modulo a prime.
    pub search_cap: u64,
    /// Highest prime power used by exhaustive searches.
    pub search_exponent: u32,
    /// Number of extra solutions the last variable must admit.
    pub probe: usize,
}

impl Default for LgConfig {
    fn default() -> Self {
        LgConfig { factor_budget: FactorBudget::default(), fallback_scan: 100_000, search_cap: 1_000_000, search_exponent: 4, probe: 3 }
    }
}

/// Counters describing a run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LgStats {
    pub rounds: usize,
    pub crt_calls: u64,
    pub crt_steps: u64,
    pub factorizations: u64,
    pub unfactored: u64,
    pub fallback_candidates: u64,
    pub constructed_mod_solutions: u64,
    pub searched_mod_solutions: u64,
    pub largest_prime_set: usize,
    pub probe_hits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LgSolution {
    pub assignment: Assignment,
    pub stats: LgStats,
}

/// Finds a positive integer solution of `phi`, increasing for `partition`,
/// from solutions modulo every prime of `pdiff(phi)`.
pub fn solve_increasing(
    phi: &DivSystem,
    partition: &VarPartition,
    mods: &ModSolutions,
    config: &LgConfig,
) -> Result<LgSolution, LgError> {
    let partition = VarPartition::for_system(phi, partition.blocks().to_vec())?.restrict(phi.vars());
    if !is_increasing(phi, &partition) {
        return Err(LgError::NotIncreasing);
    }
    let mut given = BTreeMap::new();
    for p in pdiff(phi, false)? {
        let s = mods.get(&p).filter(|s| ModPSolution::new(phi, p.clone(), s.values.clone()).is_some());
        let s = s.ok_or_else(|| LgError::MissingModSolution(p.clone()))?;
        given.insert(p, s.values.clone());
    }
    let mut stats = LgStats::default();
    let assignment = solve_rec(phi, &partition, &given, config, &mut stats)?;
    if !phi.is_satisfied_by(&assignment) {
        return Err(LgError::InvariantViolated("final assignment does not satisfy the system".into()));
    }
    Ok(LgSolution { assignment, stats })
}

/// [`solve_increasing`] with the solutions modulo difficult primes found by
/// exhaustive search.
pub fn solve_increasing_auto(phi: &DivSystem, partition: &VarPartition, config: &LgConfig) -> Result<LgSolution, LgError> {
    let mut mods = ModSolutions::new();
    for p in pdiff(phi, false)? {
        let s = find_mod_p_solution(phi, &p, config.search_exponent, config.search_cap)?;
        mods.insert(p.clone(), s.ok_or(LgError::NoModPSolution(p))?);
    }
    solve_increasing(phi, partition, &mods, config)
}

/// Non-zero S-terms of the closure of `psi` that vanish under `nu`.
pub fn ih3_violations(psi: &DivSystem, order: &VarOrder, nu: &Assignment) -> Vec<LinearPoly> {
    delta(psi, order)
        .into_iter()
        .filter(|h| !h.is_zero() && h.try_eval(nu).is_some_and(|v| v.is_zero()))
        .collect()
}

fn solve_rec(
    phi: &DivSystem,
    partition: &VarPartition,
    mods: &BTreeMap<BigInt, Assignment>,
    cfg: &LgConfig,
    stats: &mut LgStats,
) -> Result<Assignment, LgError> {
    stats.rounds += 1;
    match partition.len() {
        0 => Ok(Assignment::new()),
        1 => base_case(phi, &partition.order(), mods, cfg, stats),
        _ => first_block(phi, partition, mods, cfg, stats),
    }
}

fn invariant(msg: impl Into<String>) -> LgError {
    LgError::InvariantViolated(msg.into())
}

fn base_case(
    phi: &DivSystem,
    order: &VarOrder,
    mods: &BTreeMap<BigInt, Assignment>,
    cfg: &LgConfig,
    stats: &mut LgStats,
) -> Result<Assignment, LgError> {
    let mut lifts = Vec::new();
    for p in pdiff(phi, false)? {
        let b = &mods[&p];
        let mu = phi.mu(&p, b).ok_or_else(|| invariant(format!("left-hand side vanishes modulo {p}")))?;
        lifts.push((num_traits::pow(p.clone(), mu as usize + 1), b));
    }
    let mut nu = Assignment::new();
    let mut last = None;
    for &v in order.vars() {
        let congruences: Vec<(BigInt, BigInt)> = lifts.iter().map(|(m, b)| (m.clone(), b[&v].mod_floor(m))).collect();
        let (a, m) = crt_combine(&congruences)?;
        let roots = lhs_roots(phi, order, &nu, v);
        let mut x = if a.is_zero() { m.clone() } else { a };
        while roots.contains(&x) {
            x += &m;
        }
        nu.insert(v, x);
        last = Some((v, m, roots.len()));
    }
    if let Some((v, m, nroots)) = last {
        let mut probe = nu.clone();
        let hits = (1..=cfg.probe + nroots)
            .filter(|t| {
                probe.insert(v, &nu[&v] + &m * BigInt::from(*t));
                phi.is_satisfied_by(&probe)
            })
            .count();
        stats.probe_hits = hits;
        if hits < cfg.probe {
            return Err(invariant("solution set of the last variable is not infinite"));
        }
    }
    Ok(nu)
}

/// Integer zeros in `v` of the left-hand sides led by `v`.
fn lhs_roots(phi: &DivSystem, order: &VarOrder, nu: &Assignment, v: Var) -> BTreeSet<BigInt> {
    phi.constraints()
        .iter()
        .filter(|c| order.lv(&c.lhs) == Some(v))
        .filter_map(|c| {
            let g = c.lhs.partial_eval(nu);
            let (a, k) = (g.coeff(v), g.constant_term().clone());
            (-&k).is_multiple_of(&a).then(|| -k / a)
        })
        .collect()
}

fn smallest_prime_outside(set: &BTreeSet<BigInt>) -> BigInt {
    let mut q = BigInt::from(2);
    while set.contains(&q) {
        q = next_prime(&q);
    }
    q
}

fn first_block(
    phi: &DivSystem,
    partition: &VarPartition,
    mods: &BTreeMap<BigInt, Assignment>,
    cfg: &LgConfig,
    stats: &mut LgStats,
) -> Result<Assignment, LgError> {
    let order = partition.order();
    let block = &partition.blocks()[0];
    let psi = close_elimination(phi, &order);
    let delta_set = delta(&psi, &order);
    let closure = s_closure(&delta_set, &order);
    let given: BTreeSet<BigInt> = pdiff(phi, false)?;
    let mut pz = pzero(&psi, &order)?;
    pz.extend(given.iter().cloned());
    let easy: Vec<&BigInt> = pz.iter().filter(|p| !given.contains(*p)).collect();

    let mut lifts = Vec::new();
    for p in &given {
        let b = &mods[p];
        let mu = psi.mu(p, b).ok_or_else(|| invariant(format!("closure left-hand side vanishes modulo {p}")))?;
        lifts.push((num_traits::pow(p.clone(), mu as usize + 1), b));
    }

    let mut nu = Assignment::new();
    let mut new_primes: BTreeSet<BigInt> = BTreeSet::new();
    let mut unfactored = false;
    for &x in block {
        let mut sys = CongruenceSystem { anchor: BigInt::one(), ..Default::default() };
        sys.congruences = lifts.iter().map(|(m, b)| (m.clone(), b[&x].mod_floor(m))).collect();
        for p in &easy {
            let forbidden: BTreeSet<BigInt> = phi
                .constraints()
                .iter()
                .filter(|c| order.lv(&c.lhs) == Some(x))
                .map(|c| root_residue(&c.lhs.partial_eval(&nu), x, p))
                .collect();
            if !forbidden.is_empty() {
                sys.noncongruences.push(((*p).clone(), forbidden.into_iter().collect()));
            }
        }
        let extra;
        let qs: Vec<&BigInt> = if new_primes.is_empty() {
            extra = smallest_prime_outside(&pz);
            vec![&extra]
        } else {
            new_primes.iter().collect()
        };
        stats.largest_prime_set = stats.largest_prime_set.max(pz.len() + qs.len());
        for q in qs {
            let forbidden: BTreeSet<BigInt> = closure
                .iter()
                .filter(|h| order.lv(h) == Some(x) && !h.coeff(x).is_multiple_of(q))
                .map(|h| root_residue(&h.partial_eval(&nu), x, q))
                .collect();
            if !forbidden.is_empty() {
                sys.noncongruences.push((q.clone(), forbidden.into_iter().collect()));
            }
        }

        let mut tries = 0u64;
        loop {
            let (w, steps) = solve_mixed_crt_counted(&sys)?;
            stats.crt_calls += 1;
            stats.crt_steps += steps;
            nu.insert(x, w.clone());
            match gcd_conditions(&delta_set, &order, &nu, x, &pz) {
                Ok(()) => break,
                Err(msg) if unfactored && tries < cfg.fallback_scan => {
                    tries += 1;
                    stats.fallback_candidates += 1;
                    sys.anchor = w + 1;
                    let _ = msg;
                }
                Err(msg) => return Err(invariant(msg)),
            }
        }

        let last = block.last() == Some(&x);
        for h in closure.iter().filter(|h| order.lv(h) == Some(x)) {
            let value = h.eval(&nu);
            if value.is_zero() {
                return Err(invariant(format!("S-term {h} vanishes")));
            }
            // new primes only constrain later variables of this block
            if last {
                continue;
            }
            stats.factorizations += 1;
            match factorize_with(&value, cfg.factor_budget) {
                Ok(fs) => new_primes.extend(fs.into_iter().filter(|q| !pz.contains(q))),
                Err(_) => {
                    stats.unfactored += 1;
                    unfactored = true;
                }
            }
        }
    }

    let rest = phi.substitute(&nu).map_err(|e| invariant(format!("substitution failed: {e}")))?;
    let tail = partition.tail().restrict(rest.vars());
    if !is_increasing(&rest, &tail) {
        return Err(invariant("substituted system is not increasing"));
    }
    let remaining: Vec<Var> = rest.vars().to_vec();
    let mut next_mods = BTreeMap::new();
    for p in pdiff(&rest, false)? {
        let candidate = if given.contains(&p) {
            Some(restrict(&mods[&p], &remaining))
        } else if pz.contains(&p) {
            let start: Assignment = nu.iter().map(|(v, a)| (*v, a.mod_floor(&p))).collect();
            extend_avoiding_lhs_roots(phi, &order, &p, &start).map(|b| restrict(&b, &remaining))
        } else {
            stats.constructed_mod_solutions += 1;
            new_prime_solution(&psi, &order, &nu, &p)
        };
        let values = match candidate.filter(|b| rest.is_mod_p_solution(&p, b)) {
            Some(b) => b,
            None => {
                stats.searched_mod_solutions += 1;
                find_mod_p_solution(&rest, &p, cfg.search_exponent, cfg.search_cap)?
                    .ok_or_else(|| LgError::NoModPSolution(p.clone()))?
                    .values
            }
        };
        next_mods.insert(p, values);
    }
    let tail_solution = solve_rec(&rest, &tail, &next_mods, cfg, stats)?;
    nu.extend(tail_solution);
    Ok(nu)
}

fn restrict(a: &Assignment, keep: &[Var]) -> Assignment {
    a.iter().filter(|(v, _)| keep.contains(v)).map(|(v, x)| (*v, x.clone())).collect()
}

/// Checks, for the S-terms whose variables are all bound and one of which is
/// led by `x`, that none vanishes and that pairs with a non-zero S-polynomial
/// share only primes of `pz`.
fn gcd_conditions(
    delta_set: &BTreeSet<LinearPoly>,
    order: &VarOrder,
    nu: &Assignment,
    x: Var,
    pz: &BTreeSet<BigInt>,
) -> Result<(), String> {
    let bound: Vec<(&LinearPoly, BigInt)> = delta_set.iter().filter_map(|h| h.try_eval(nu).map(|v| (h, v))).collect();
    for (h, hv) in bound.iter().filter(|(h, _)| order.lv(h) == Some(x)) {
        if hv.is_zero() {
            return Err(format!("S-term {h} vanishes"));
        }
        for (g, gv) in &bound {
            if s_polynomial(h, g, order).is_zero() {
                continue;
            }
            let mut common = hv.gcd(gv);
            for p in pz {
                if p > &common {
                    break;
                }
                while common.is_multiple_of(p) {
                    common /= p;
                }
            }
            if !common.is_one() {
                return Err(format!("values of {h} and {g} share the factor {common}"));
            }
        }
    }
    Ok(())
}

/// Solution modulo a prime outside the zero set of the closure, for the
/// variables left unbound by `nu`.
fn new_prime_solution(psi: &DivSystem, order: &VarOrder, nu: &Assignment, p: &BigInt) -> Option<Assignment> {
    let terms = psi.terms();
    let remaining: Vec<Var> = order.vars().iter().copied().filter(|v| !nu.contains_key(v)).collect();
    let pivot = psi
        .constraints()
        .iter()
        .filter(|c| !c.lhs.is_constant())
        .filter_map(|c| c.lhs.try_eval(nu).map(|a| (&c.lhs, a)))
        .find(|(_, a)| !a.is_zero() && a.is_multiple_of(p));
    let mut vals = nu.clone();
    match pivot {
        None => {
            for &y in &remaining {
                let forbidden = unit_roots(terms.iter(), order, &vals, y, p)?;
                vals.insert(y, smallest_free(p, &forbidden)?);
            }
        }
        Some((lhs, value)) => {
            let f = lhs.primitive_part().ok()?.0;
            let u = vp(&value, p).ok()? as usize;
            let rows = order.rows();
            let gens: Vec<Vec<BigInt>> =
                module_span(psi, &f).generators(psi).iter().map(|g| g.to_column(&rows)).collect();
            let f_terms = sterms(psi, &f, order);
            let pu = num_traits::pow(p.clone(), u);
            let pu1 = &pu * p;
            for &y in &remaining {
                let related: Vec<&LinearPoly> = terms
                    .iter()
                    .filter(|g| order.lv(g) == Some(y) && min_positive_multiplier(&g.to_column(&rows), &gens).is_some())
                    .collect();
                let b = if related.is_empty() {
                    let forbidden = unit_roots(f_terms.iter(), order, &vals, y, p)?;
                    smallest_free(p, &forbidden)?
                } else {
                    let mut residues = BTreeSet::new();
                    for g in &related {
                        if g.coeff(y).is_multiple_of(p) {
                            return None;
                        }
                        residues.insert(root_residue(&g.partial_eval(&vals), y, &pu1));
                    }
                    let r = residues.first()?.mod_floor(&pu);
                    if residues.iter().any(|s| s.mod_floor(&pu) != r) {
                        return None;
                    }
                    let mut gamma = BigInt::zero();
                    loop {
                        if &gamma >= p {
                            return None;
                        }
                        let b = &r + &pu * &gamma;
                        if !residues.contains(&b) {
                            break b;
                        }
                        gamma += 1;
                    }
                };
                vals.insert(y, b);
            }
        }
    }
    Some(restrict(&vals, &remaining))
}

/// Residues modulo `p` at which some polynomial led by `y` vanishes, after
/// partial evaluation. `None` if a leading coefficient is divisible by `p`.
fn unit_roots<'a>(
    polys: impl Iterator<Item = &'a LinearPoly>,
    order: &VarOrder,
    vals: &Assignment,
    y: Var,
    p: &BigInt,
) -> Option<BTreeSet<BigInt>> {
    let mut out = BTreeSet::new();
    for h in polys.filter(|h| order.lv(h) == Some(y)) {
        if h.coeff(y).is_multiple_of(p) {
            return None;
        }
        out.insert(root_residue(&h.partial_eval(vals), y, p));
    }
    Some(out)
}
