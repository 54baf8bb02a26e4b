//! Criteria on divisibility systems.

use std::sync::OnceLock;
use std::time::Instant;

use divsys::{
    assignment, close_elimination, is_increasing, module_span, module_span_from, pdiff, span_scalar_bound, DivConstraint,
    DivSystem, LinearPoly, VarOrder, VarPartition,
};
use local_global::{ih3_violations, solve_increasing_auto, solve_mod_easy_prime, LgConfig, LgError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use numthy::next_prime;
use oracle::{enumerate_mod_p, enumerate_solutions, enumerate_solutions_capped, is_mod_p_witness, Window, DEFAULT_CAP};

use crate::gen::{chained_system, div_system, draw, runner};
use crate::{Tally, Verdict};

fn eval(f: &LinearPoly, x: &[i128]) -> i128 {
    let c = f.constant_term().to_i128().expect("small constant");
    f.coeffs().iter().fold(c, |acc, (v, a)| acc + a.to_i128().expect("small coefficient") * x[*v])
}

fn natural_order(phi: &DivSystem) -> VarOrder {
    VarOrder::new(phi.vars().to_vec()).expect("distinct variables")
}

/// Random systems with their solutions on `[-15, 15]^d`.
fn corpus() -> &'static [(DivSystem, Vec<Vec<i128>>)] {
    static CORPUS: OnceLock<Vec<(DivSystem, Vec<Vec<i128>>)>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut r = runner(5);
        let strategy = div_system(4, 4, 4);
        (0..200)
            .map(|_| {
                let phi = draw(&mut r, &strategy);
                let w = Window::cube(phi.vars().len(), -15, 15).expect("valid window");
                let sols = enumerate_solutions(&phi, &w).expect("window within cap");
                (phi, sols)
            })
            .collect()
    })
}

const SMALL_PRIMES: [i128; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

pub fn elimination_closure() -> Verdict {
    let mut t = Tally::default();
    let mut solutions = 0;
    for (i, (phi, sols)) in corpus().iter().enumerate() {
        t.checked += 1;
        solutions += sols.len();
        let d = phi.vars().len();
        let closed = close_elimination(phi, &natural_order(phi));
        t.ensure(closed.len() <= phi.len() * (d + 2), || format!("system {i}: {} constraints from {phi}", closed.len()));
        let w = Window::cube(d, -15, 15).expect("valid window");
        t.ensure(enumerate_solutions(&closed, &w).as_deref() == Ok(sols.as_slice()), || {
            format!("system {i}: windowed solutions differ between {phi} and {closed}")
        });
        for p in SMALL_PRIMES {
            let before = enumerate_mod_p(phi, p, 2, DEFAULT_CAP).map(|s| s.is_some());
            let after = enumerate_mod_p(&closed, p, 2, DEFAULT_CAP).map(|s| s.is_some());
            t.ensure(before.is_ok() && before == after, || {
                format!("system {i}: solvability modulo {p} {before:?} vs {after:?} for {phi} and {closed}")
            });
        }
    }
    t.verdict(format!("200 systems, {solutions} window solutions"))
}

pub fn module_spans() -> Verdict {
    let mut t = Tally::default();
    let mut pairs = 0u64;
    for (i, (phi, sols)) in corpus().iter().enumerate() {
        let bound = span_scalar_bound(phi);
        for f in phi.lhs_primitive_parts() {
            t.checked += 1;
            let span = module_span(phi, &f);
            t.ensure(module_span_from(phi, &f, span.scalars.clone()) == span, || format!("system {i}: span of {f} not stable"));
            t.ensure(span.scalars.iter().all(|c| c.abs() <= bound), || format!("system {i}: span scalars of {f} exceed the bound"));
            let gens = span.generators(phi);
            let combo = gens.iter().enumerate().fold(LinearPoly::zero(), |acc, (k, g)| acc.add(&g.scale(&BigInt::from(k as i64 * 2 - 3))));
            for x in sols {
                let fx = eval(&f, x);
                for g in gens.iter().chain(std::iter::once(&combo)) {
                    pairs += 1;
                    if fx == 0 || eval(g, x) % fx != 0 {
                        t.fail(format!("system {i}: {f} does not divide {g} at {x:?}"));
                    }
                }
            }
        }
    }
    let spans = t.checked;
    t.verdict(format!("{spans} spans, {pairs} solution-element pairs"))
}

pub fn easy_primes() -> Verdict {
    let mut t = Tally::default();
    for (i, (phi, _)) in corpus().iter().take(20).enumerate() {
        let bad = pdiff(phi, false).expect("small coefficients factor");
        let mut p = BigInt::one();
        let mut used = 0;
        while used < 5 {
            p = next_prime(&p);
            if bad.contains(&p) {
                continue;
            }
            used += 1;
            t.checked += 1;
            match solve_mod_easy_prime(phi, &p) {
                Ok(s) => {
                    t.ensure(s.values.values().all(|v| !v.is_negative() && *v < p), || format!("system {i}: residues {:?} modulo {p}", s.values));
                    t.ensure(phi.constraints().iter().all(|c| !c.lhs.eval(&s.values).is_multiple_of(&p)), || {
                        format!("system {i}: a left-hand side vanishes modulo {p} at {:?}", s.values)
                    });
                    t.ensure(is_mod_p_witness(phi, p.to_i128().expect("small"), &s.values) == Ok(true), || {
                        format!("system {i}: {:?} is not a solution modulo {p}", s.values)
                    });
                }
                Err(e) => t.fail(format!("system {i}: {e} modulo {p} for {phi}")),
            }
        }
    }
    t.verdict("20 systems, 5 primes each")
}

fn running_example() -> (DivSystem, VarPartition) {
    let p = LinearPoly::from_i64;
    // u = 0, v = 1, x = 2, y = 3, z = 4
    let phi = DivSystem::from_constraints(vec![
        DivConstraint::new(p(&[(1, 1)], 0), p(&[(0, 1), (2, 1), (3, 1)], 0)),
        DivConstraint::new(p(&[(1, 1)], 0), p(&[(2, 1)], 0)),
        DivConstraint::new(p(&[(3, 1)], 2), p(&[(4, 1)], 1)),
        DivConstraint::new(p(&[(1, 1)], 0), p(&[(4, 1)], 0)),
    ])
    .expect("valid system");
    (phi, VarPartition::new(vec![vec![0, 1], vec![2], vec![3], vec![4]]).expect("disjoint"))
}

pub fn local_global() -> Verdict {
    let mut t = Tally::default();
    let (mut solved, mut unanswered) = (0, 0);
    let mut check = |t: &mut Tally, label: String, phi: &DivSystem, partition: &VarPartition| {
        t.checked += 1;
        match solve_increasing_auto(phi, partition, &LgConfig::default()) {
            Ok(s) => {
                solved += 1;
                let x = &s.assignment;
                let at = |f: &LinearPoly| -> BigInt { f.coeffs().iter().map(|(v, a)| a * &x[v]).sum::<BigInt>() + f.constant_term() };
                let ok = phi.constraints().iter().all(|c| {
                    let l = at(&c.lhs);
                    !l.is_zero() && at(&c.rhs).is_multiple_of(&l)
                });
                t.ensure(ok && phi.vars().iter().all(|v| x[v].is_positive()), || format!("{label}: {x:?} fails {phi}"));
            }
            Err(e @ LgError::InvariantViolated(_)) => t.fail(format!("{label}: {e} on {phi}")),
            Err(_) => unanswered += 1,
        }
    };
    let mut r = runner(7);
    let strategy = chained_system();
    let chain = VarPartition::new(vec![vec![0], vec![1], vec![2]]).expect("disjoint");
    let mut drawn = 0;
    while drawn < 200 {
        let phi = draw(&mut r, &strategy);
        if is_increasing(&phi, &chain) {
            drawn += 1;
            check(&mut t, format!("chained system {drawn}"), &phi, &chain);
        }
    }
    for (i, (phi, _)) in corpus().iter().enumerate() {
        let singletons = VarPartition::new(phi.vars().iter().map(|v| vec![*v]).collect()).expect("disjoint");
        if is_increasing(phi, &singletons) {
            check(&mut t, format!("corpus system {i}"), phi, &singletons);
        }
    }
    let (phi, partition) = running_example();
    check(&mut t, "running example".into(), &phi, &partition);
    let order = partition.order();
    let psi = close_elimination(&phi, &order);
    t.ensure(!ih3_violations(&psi, &order, &assignment(&[(0, 2)])).is_empty(), || "u = 2 is not rejected".into());
    t.ensure(ih3_violations(&psi, &order, &assignment(&[(0, 3)])).is_empty(), || "u = 3 is rejected".into());
    let systems = t.checked;
    t.verdict(format!("{systems} systems, {solved} solved and verified, {unanswered} without a modular solution"))
}

/// `y_i + 1 | y_{i+1} + 1` and `y_i + 2 | y_{i+1} + 1`: the chain with
/// `x_i = y_i + 1 > 1` over positive `y`.
fn chain(n: usize) -> DivSystem {
    let mut cons = Vec::new();
    for i in 0..n {
        let next = LinearPoly::from_i64(&[(i + 1, 1)], 1);
        cons.push(DivConstraint::new(LinearPoly::from_i64(&[(i, 1)], 1), next.clone()));
        cons.push(DivConstraint::new(LinearPoly::from_i64(&[(i, 1)], 2), next));
    }
    DivSystem::new((0..=n).collect(), cons).expect("valid system")
}

pub fn chain_family() -> Verdict {
    let start = Instant::now();
    let mut t = Tally::default();
    let mut tops = Vec::new();
    for n in [2usize, 3] {
        t.checked += 1;
        let phi = chain(n);
        let partition = VarPartition::new((0..=n).map(|v| vec![v]).collect()).expect("disjoint");
        t.ensure(is_increasing(&phi, &partition), || format!("chain {n} is not increasing"));
        match solve_increasing_auto(&phi, &partition, &LgConfig::default()) {
            Ok(s) => {
                let x: Vec<BigInt> = (0..=n).map(|v| &s.assignment[&v] + 1).collect();
                let ok = (0..n).all(|i| x[i] > BigInt::one() && x[i + 1].is_multiple_of(&x[i]) && x[i + 1].is_multiple_of(&(&x[i] + 1)));
                let floor = BigInt::from(2).pow(1u32 << n);
                t.ensure(ok && x[n] >= floor, || format!("chain {n}: {x:?}"));
                tops.push(x[n].to_string());
            }
            Err(e) => t.fail(format!("chain {n}: {e}")),
        }
    }
    let p = LinearPoly::from_i64;
    let original = DivSystem::new(
        vec![0, 1, 2],
        vec![
            DivConstraint::new(p(&[(0, 1)], 0), p(&[(1, 1)], 0)),
            DivConstraint::new(p(&[(0, 1)], 1), p(&[(1, 1)], 0)),
            DivConstraint::new(p(&[(1, 1)], 0), p(&[(2, 1)], 0)),
            DivConstraint::new(p(&[(1, 1)], 1), p(&[(2, 1)], 0)),
        ],
    )
    .expect("valid system");
    let w = Window::cube(3, 2, 300).expect("valid window");
    let least = enumerate_solutions_capped(&original, &w, 30_000_000).map(|s| s.iter().map(|x| x[2]).min());
    t.checked += 1;
    match &least {
        Ok(Some(m)) => t.ensure(*m >= 16, || format!("least x_2 in the window is {m}")),
        other => t.fail(format!("oracle found no chain in the window: {other:?}")),
    }
    let secs = start.elapsed().as_secs_f64();
    t.ensure(secs <= 60.0, || format!("took {secs:.0}s"));
    let least = least.ok().flatten().map_or("none".into(), |m| m.to_string());
    t.verdict(format!("x_n = {} for n = 2, 3; least x_2 in [2, 300] is {least}; {secs:.1}s", tops.join(", ")))
}
