#![allow(dead_code)]

use std::collections::BTreeSet;

use divsys::{Assignment, LinearPoly};
use ipgcd::{positive_functional, GcdConstraint, GcdToDivTriple, Inequality, IpGcdInstance, Objective, Rel, Role, Sense};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

pub fn poly(coeffs: &[i64], c: i64) -> LinearPoly {
    LinearPoly::new(coeffs.iter().enumerate().map(|(v, a)| (v, BigInt::from(*a))), c)
}

pub fn rel() -> impl Strategy<Value = Rel> {
    prop_oneof![Just(Rel::Le), Just(Rel::Eq), Just(Rel::Ne), Just(Rel::Ge)]
}

fn lin(d: usize, coeff: i64, constant: i64) -> impl Strategy<Value = LinearPoly> {
    (prop::collection::vec(-coeff..=coeff, d), -constant..=constant).prop_map(|(a, c)| poly(&a, c))
}

fn var_or_lin(d: usize) -> impl Strategy<Value = LinearPoly> {
    prop_oneof![(0..d).prop_map(LinearPoly::var), lin(d, 2, 3)]
}

pub fn gcd_constraint(d: usize) -> impl Strategy<Value = GcdConstraint> {
    (var_or_lin(d), var_or_lin(d), rel(), 1i64..=4).prop_map(|(f, g, r, c)| GcdConstraint::new(f, g, r, c))
}

/// Instances over `d` variables with `rows` extra random rows, optional box
/// `[-b, b]`, and 1 to `k` GCD constraints.
pub fn instance(d: usize, rows: usize, k: usize, boxed: Option<i64>) -> impl Strategy<Value = IpGcdInstance> {
    (prop::collection::vec(lin(d, 3, 6), 0..=rows), prop::collection::vec(gcd_constraint(d), 1..=k)).prop_map(
        move |(rs, gs)| {
            let mut inst = IpGcdInstance::with_vars(d);
            if let Some(b) = boxed {
                for v in 0..d {
                    inst.bound_var(v, -b, b);
                }
            }
            for r in rs {
                inst.add_row(Inequality { poly: r });
            }
            for g in gs {
                inst.add_gcd(g);
            }
            inst
        },
    )
}

pub fn with_objective(inst: IpGcdInstance, coeffs: &[i64], maximize: bool) -> IpGcdInstance {
    let mut inst = inst;
    let sense = if maximize { Sense::Maximize } else { Sense::Minimize };
    inst.objective = Some(Objective { poly: poly(coeffs, 0), sense });
    inst
}

pub fn to_i128(x: &[BigInt]) -> Vec<i128> {
    x.iter().map(|v| v.to_i128().unwrap()).collect()
}

/// Points `u + E·λ` of one triple whose first `n` coordinates lie in
/// `[-r, r]` and whose other coordinates lie in `[-far, far]`, projected to
/// the first `n`; `z` and `w` values are searched per variable since each
/// occurs in its own pair of constraints once `y` is fixed.
pub fn triple_points(t: &GcdToDivTriple, n: usize, r: i64, far: i64) -> BTreeSet<Vec<i128>> {
    let ys = t.vars_with(Role::Y);
    let d = t.u.len();
    let gens: Vec<Vec<BigInt>> = ys.iter().map(|v| t.e.column(*v)).collect();
    let phi = positive_functional(&gens, d).expect("pointed cone");
    let value = |x: &[BigInt]| -> BigInt { x.iter().zip(&phi).map(|(a, b)| a * b).sum() };
    let ceiling: BigInt = phi
        .iter()
        .enumerate()
        .map(|(i, p)| BigInt::from(p.abs() * if i < n { r } else { far }))
        .sum();
    let mut out = BTreeSet::new();
    let zero: Assignment = ys.iter().map(|v| (*v, BigInt::from(0))).collect();
    let mut stack: Vec<(Assignment, usize)> = vec![(zero, 0)];
    while let Some((lambda, start)) = stack.pop() {
        let x = t.point(&lambda);
        let head = to_i128(&x[..n]);
        if head.iter().all(|v| v.abs() <= r as i128) && rest_satisfiable(t, &lambda) {
            out.insert(head);
        }
        for j in start..ys.len() {
            let mut next = lambda.clone();
            *next.get_mut(&ys[j]).expect("y variable") += 1;
            if value(&t.point(&next)) <= ceiling {
                stack.push((next, j));
            }
        }
    }
    out
}

fn rest_satisfiable(t: &GcdToDivTriple, lambda: &Assignment) -> bool {
    let Ok(rest) = t.psi.substitute(lambda) else { return false };
    rest.vars().iter().all(|&v| {
        let cons: Vec<_> = rest.constraints().iter().filter(|c| c.lhs.vars().chain(c.rhs.vars()).any(|u| u == v)).collect();
        let bound: BigInt = cons.iter().map(|c| c.lhs.norm() + c.rhs.norm()).product::<BigInt>();
        let bound = bound.to_u64().unwrap();
        (0..=bound).any(|val| {
            let a: Assignment = [(v, BigInt::from(val))].into();
            cons.iter().all(|c| c.holds(&a))
        })
    })
}

pub fn union_points(ts: &[GcdToDivTriple], n: usize, r: i64, far: i64) -> BTreeSet<Vec<i128>> {
    ts.iter().flat_map(|t| triple_points(t, n, r, far)).collect()
}
