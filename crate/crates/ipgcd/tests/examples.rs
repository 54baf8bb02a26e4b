use divsys::LinearPoly;
use ipgcd::{feasible, optimize, GcdConstraint, Inequality, IpConfig, IpGcdInstance, Objective, Rel, Sense, SolveOutcome};
use num_bigint::BigInt;
use num_integer::Integer;

fn x(v: usize) -> LinearPoly {
    LinearPoly::var(v)
}

fn k(c: i64) -> LinearPoly {
    LinearPoly::constant(c)
}

fn single(lo: Option<i64>, hi: Option<i64>) -> IpGcdInstance {
    let mut inst = IpGcdInstance::with_vars(1);
    if let Some(lo) = lo {
        inst.add_row(Inequality::ge(&x(0), &k(lo)));
    }
    if let Some(hi) = hi {
        inst.add_row(Inequality::le(&x(0), &k(hi)));
    }
    inst
}

#[test]
fn gcd_with_twelve_is_four() {
    let mut inst = single(Some(1), None);
    inst.add_gcd(GcdConstraint::new(x(0), k(12), Rel::Eq, 4));
    let out = feasible(&inst, &IpConfig::default()).unwrap().outcome;
    let SolveOutcome::Feasible(w) = out else { panic!("{out:?}") };
    assert_eq!(w[0].gcd(&BigInt::from(12)), BigInt::from(4));
}

#[test]
fn gcd_of_three_with_itself_is_not_two() {
    let mut inst = single(Some(3), Some(3));
    inst.add_gcd(GcdConstraint::new(x(0), x(0), Rel::Eq, 2));
    assert_eq!(feasible(&inst, &IpConfig::default()).unwrap().outcome, SolveOutcome::Infeasible);
}

#[test]
fn gcd_with_six_neither_one_nor_six() {
    let mut inst = single(Some(1), Some(10));
    inst.add_gcd(GcdConstraint::new(x(0), k(6), Rel::Ne, 1));
    inst.add_gcd(GcdConstraint::new(x(0), k(6), Rel::Ne, 6));
    let SolveOutcome::Feasible(w) = feasible(&inst, &IpConfig::default()).unwrap().outcome else { panic!() };
    let w = i64::try_from(&w[0]).unwrap();
    assert!([2, 3, 4, 8, 9, 10].contains(&w));
}

#[test]
fn smallest_x_with_gcd_two_against_four() {
    let mut inst = single(Some(3), None);
    inst.add_gcd(GcdConstraint::new(x(0), k(4), Rel::Eq, 2));
    inst.objective = Some(Objective { poly: x(0), sense: Sense::Minimize });
    let out = optimize(&inst, &IpConfig::default()).unwrap().outcome;
    assert_eq!(out, SolveOutcome::Optimal(vec![BigInt::from(6)], BigInt::from(6)));
}

#[test]
fn unbounded_maximum() {
    let mut inst = single(Some(1), None);
    inst.objective = Some(Objective { poly: x(0), sense: Sense::Maximize });
    assert_eq!(optimize(&inst, &IpConfig::default()).unwrap().outcome, SolveOutcome::Unbounded);
}

#[test]
fn pinned_minimum() {
    let mut inst = single(Some(2), Some(2));
    inst.objective = Some(Objective { poly: x(0), sense: Sense::Minimize });
    let out = optimize(&inst, &IpConfig::default()).unwrap().outcome;
    assert_eq!(out, SolveOutcome::Optimal(vec![BigInt::from(2)], BigInt::from(2)));
}

#[test]
fn two_variable_coprime_pair() {
    // gcd(x, y) = 1, gcd(x + 1, y) = 3 over the positive quadrant
    let mut inst = IpGcdInstance::with_vars(2);
    inst.add_row(Inequality::ge(&x(0), &k(1)));
    inst.add_row(Inequality::ge(&x(1), &k(1)));
    inst.add_gcd(GcdConstraint::new(x(0), x(1), Rel::Eq, 1));
    inst.add_gcd(GcdConstraint::new(x(0).add(&k(1)), x(1), Rel::Eq, 3));
    let SolveOutcome::Feasible(w) = feasible(&inst, &IpConfig::default()).unwrap().outcome else { panic!() };
    assert!(inst.is_satisfied_by(&w));
}

#[test]
fn parallel_mode_reports_same_witness() {
    let mut inst = IpGcdInstance::with_vars(2);
    inst.add_gcd(GcdConstraint::new(x(0), x(1), Rel::Eq, 5));
    inst.add_row(Inequality::le(&x(0), &k(-2)));
    let seq = feasible(&inst, &IpConfig::default()).unwrap().outcome;
    let par = feasible(&inst, &IpConfig { parallel: true, ..IpConfig::default() }).unwrap().outcome;
    assert_eq!(seq, par);
    let SolveOutcome::Feasible(w) = seq else { panic!() };
    assert!(inst.is_satisfied_by(&w));
}
