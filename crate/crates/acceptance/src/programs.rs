//! Criteria on GCD programs: feasibility, optimization, triple solutions
//! modulo primes and the shifted-cone decomposition.

use std::collections::BTreeSet;
use std::time::Instant;

use divsys::{pdiff, LinearPoly};
use int_linalg::{hnf, IntMatrix};
use ipgcd::{
    cone_norm_bound, feasible, force_increasing, normalize, optimize, points_in_box, sign_split, solve_triple_mod_p, to_triples,
    triple_mod_p_bound, vzgs_decompose, DecomposeConfig, Inequality, IpConfig, IpGcdInstance, Sense, SolveOutcome,
};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use oracle::{best_in_window, enumerate_mod_p, enumerate_solutions, first_solution, is_mod_p_witness, Window, DEFAULT_CAP};

use crate::gen::{boxed_instance, draw, inequality_rows, objective_instance, open_instance, runner, Bounds};
use crate::{Tally, Verdict};

pub fn feasibility() -> Verdict {
    let start = Instant::now();
    let mut r = runner(1);
    let strategy = boxed_instance(20);
    let mut t = Tally::default();
    let mut infeasible = 0;
    for i in 0..500 {
        let inst = draw(&mut r, &strategy);
        t.checked += 1;
        let w = Window::cube(inst.num_vars(), -20, 20).expect("valid window");
        let truth = match first_solution(&inst, &w) {
            Ok(x) => x,
            Err(e) => {
                t.fail(format!("instance {i}: oracle error {e}"));
                continue;
            }
        };
        match feasible(&inst, &IpConfig::default()).map(|s| s.outcome) {
            Ok(SolveOutcome::Feasible(x)) if truth.is_some() => {
                t.ensure(inst.is_satisfied_by(&x), || format!("instance {i}: witness {x:?} fails\n{inst}"));
            }
            Ok(SolveOutcome::Infeasible) if truth.is_none() => infeasible += 1,
            other => t.fail(format!("instance {i}: solver {other:?}, oracle {truth:?}\n{inst}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    t.ensure(secs <= 600.0, || format!("took {secs:.0}s"));
    t.verdict(format!("500 instances, {infeasible} infeasible, {secs:.1}s"))
}

#[derive(Debug, PartialEq, Eq)]
enum Truth {
    Infeasible,
    Unbounded,
    Optimum(i128),
}

fn window(bounds: &Bounds, radius: i64) -> Window {
    let lo = bounds.iter().map(|(l, u)| l.unwrap_or(-radius.max(radius - u.unwrap_or(0))) as i128).collect();
    let hi = bounds.iter().map(|(l, u)| u.unwrap_or(radius.max(l.unwrap_or(0) + radius)) as i128).collect();
    Window::new(lo, hi).expect("bounds are ordered")
}

/// Best values at radii 10, 100 and 1000; strict improvement at each step
/// means unbounded.
fn oracle_optimum(inst: &IpGcdInstance, bounds: &Bounds) -> Result<Truth, String> {
    let min = inst.objective.as_ref().expect("objective").sense == Sense::Minimize;
    let mut values = Vec::new();
    for radius in [10, 100, 1000] {
        let best = best_in_window(inst, &window(bounds, radius)).map_err(|e| e.to_string())?;
        values.push(best.map(|(_, v)| if min { v } else { -v }));
    }
    let better = |a: &Option<i128>, b: &Option<i128>| match (a, b) {
        (Some(a), Some(b)) => a < b,
        (Some(_), None) => true,
        _ => false,
    };
    Ok(if better(&values[1], &values[0]) && better(&values[2], &values[1]) {
        Truth::Unbounded
    } else {
        match values[2] {
            Some(v) => Truth::Optimum(if min { v } else { -v }),
            None => Truth::Infeasible,
        }
    })
}

pub fn optimization() -> Verdict {
    let mut r = runner(2);
    let strategy = objective_instance();
    let mut t = Tally::default();
    let (mut unbounded, mut infeasible) = (0, 0);
    while t.checked < 200 {
        let (inst, bounds) = draw(&mut r, &strategy);
        if window(&bounds, 1000).volume() > 5_000_000 {
            continue;
        }
        let i = t.checked;
        t.checked += 1;
        let truth = match oracle_optimum(&inst, &bounds) {
            Ok(v) => v,
            Err(e) => {
                t.fail(format!("instance {i}: oracle error {e}"));
                continue;
            }
        };
        let got = optimize(&inst, &IpConfig::default()).map(|s| s.outcome);
        match (&got, &truth) {
            (Ok(SolveOutcome::Optimal(x, v)), Truth::Optimum(o)) => {
                t.ensure(inst.is_satisfied_by(x) && inst.objective_value(x) == *v && v.to_i128() == Some(*o), || {
                    format!("instance {i}: solver {x:?} value {v}, oracle {o}\n{inst}")
                });
            }
            (Ok(SolveOutcome::Unbounded), Truth::Unbounded) => unbounded += 1,
            (Ok(SolveOutcome::Infeasible), Truth::Infeasible) => infeasible += 1,
            _ => t.fail(format!("instance {i}: solver {got:?}, oracle {truth:?}\n{inst}")),
        }
    }
    t.verdict(format!("200 instances, {unbounded} unbounded, {infeasible} infeasible"))
}

/// Largest valuation at `p` of a positive constant in the system.
fn constant_valuation(psi: &divsys::DivSystem, p: &BigInt) -> u32 {
    psi.constraints()
        .iter()
        .flat_map(|c| [c.lhs.constant_term(), c.rhs.constant_term()])
        .filter(|c| c.is_positive())
        .map(|c| numthy::vp(c, p).expect("p is prime and c non-zero") as u32)
        .max()
        .unwrap_or(0)
}

pub fn triple_mod_p() -> Verdict {
    let mut r = runner(8);
    let strategy = open_instance();
    let mut t = Tally::default();
    let (mut found, mut absent, mut skipped) = (0, 0, 0);
    for i in 0..100 {
        let inst = draw(&mut r, &strategy);
        let Ok(members) = sign_split(&normalize(&inst), 10_000) else {
            skipped += 1;
            continue;
        };
        for m in members {
            let triples = match to_triples(&m, DecomposeConfig::default()).and_then(|ts| force_increasing(ts, 1_000_000)) {
                Ok(ts) => ts,
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            };
            for tr in triples.iter().filter(|tr| !tr.psi.is_empty()).take(6) {
                for p in pdiff(&tr.psi, false).expect("small coefficients factor") {
                    let pi = p.to_i128().expect("small prime");
                    t.checked += 1;
                    match solve_triple_mod_p(tr, &p, 1_000_000) {
                        Ok(Some(s)) => {
                            found += 1;
                            let bound = triple_mod_p_bound(tr, &p);
                            t.ensure(s.values.values().all(|v| v.abs() <= bound), || {
                                format!("instance {i}: witness {:?} above bound {bound} for p = {p}", s.values)
                            });
                            t.ensure(is_mod_p_witness(&tr.psi, pi, &s.values) == Ok(true), || {
                                format!("instance {i}: {:?} is not a solution of {} modulo {p}", s.values, tr.psi)
                            });
                        }
                        Ok(None) => {
                            absent += 1;
                            let k = constant_valuation(&tr.psi, &p) + 1;
                            match enumerate_mod_p(&tr.psi, pi, k, DEFAULT_CAP) {
                                Ok(None) => {}
                                other => t.fail(format!("instance {i}: absence modulo {p} contradicted by {other:?}")),
                            }
                        }
                        Err(_) => skipped += 1,
                    }
                }
            }
        }
    }
    t.verdict(format!("{found} witnesses, {absent} absences confirmed, {skipped} over budget"))
}

fn rank(rows: &[(Vec<i64>, i64)]) -> usize {
    let m: Vec<Vec<BigInt>> = rows.iter().map(|(a, _)| a.iter().map(|x| BigInt::from(*x)).collect()).collect();
    hnf(&IntMatrix::from_rows(&m)).rank()
}

pub fn decomposition() -> Verdict {
    let mut r = runner(10);
    let strategy = inequality_rows(3, 4);
    let mut t = Tally::default();
    let mut points = 0;
    while t.checked < 50 {
        let (d, raw) = draw(&mut r, &strategy);
        if rank(&raw) < d {
            continue;
        }
        let i = t.checked;
        t.checked += 1;
        let rows: Vec<(Vec<BigInt>, BigInt)> =
            raw.iter().map(|(a, b)| (a.iter().map(|x| BigInt::from(*x)).collect(), BigInt::from(*b))).collect();
        let cones = match vzgs_decompose(&rows, d, DecomposeConfig::default()) {
            Ok(c) => c,
            Err(e) => {
                t.fail(format!("system {i}: {e} on {raw:?}"));
                continue;
            }
        };
        let bound = cone_norm_bound(&rows, d);
        t.ensure(cones.iter().all(|c| c.norms().0 <= bound && c.norms().1 <= bound), || {
            format!("system {i}: cone norms exceed {bound} on {raw:?}")
        });
        let mut inst = IpGcdInstance::with_vars(d);
        for (a, b) in &raw {
            let terms: Vec<(usize, i64)> = a.iter().copied().enumerate().collect();
            inst.rows.push(Inequality { poly: LinearPoly::from_i64(&terms, -b) });
        }
        let truth: BTreeSet<Vec<i64>> = enumerate_solutions(&inst, &Window::cube(d, -8, 8).expect("valid window"))
            .expect("small window")
            .into_iter()
            .map(|x| x.into_iter().map(|v| v as i64).collect())
            .collect();
        let union = points_in_box(&cones, &vec![-8; d], &vec![8; d]);
        points += truth.len();
        t.ensure(union == truth, || format!("system {i}: {} cone points vs {} integer points on {raw:?}", union.len(), truth.len()));
    }
    t.verdict(format!("50 systems, {points} window points"))
}
