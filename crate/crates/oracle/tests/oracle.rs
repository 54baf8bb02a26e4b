use divsys::{DivConstraint, DivSystem, LinearPoly};
use ipgcd::{GcdConstraint, Inequality, IpGcdInstance, Objective, Rel, Sense};
use oracle::{best_in_window, enumerate_mod_p, enumerate_solutions, enumerate_solutions_capped, first_solution, OracleError, Window};

fn p(t: &[(usize, i64)], c: i64) -> LinearPoly {
    LinearPoly::from_i64(t, c)
}

#[test]
fn gcd_with_twelve_on_small_window() {
    let mut inst = IpGcdInstance::with_vars(1);
    inst.add_gcd(GcdConstraint::new(p(&[(0, 1)], 0), p(&[], 12), Rel::Eq, 4));
    let sols = enumerate_solutions(&inst, &Window::cube(1, 0, 30).unwrap()).unwrap();
    assert_eq!(sols, vec![vec![4], vec![8], vec![16], vec![20], vec![28]]);
}

#[test]
fn variable_dividing_its_successor() {
    let phi = DivSystem::from_constraints(vec![DivConstraint::new(p(&[(0, 1)], 0), p(&[(0, 1)], 1))]).unwrap();
    let sols = enumerate_solutions(&phi, &Window::cube(1, -3, 3).unwrap()).unwrap();
    assert_eq!(sols, vec![vec![-1], vec![1]]);
}

#[test]
fn empty_system_accepts_window() {
    let phi = DivSystem::new(vec![0], vec![]).unwrap();
    assert_eq!(enumerate_solutions(&phi, &Window::cube(1, 0, 1).unwrap()).unwrap(), vec![vec![0], vec![1]]);
}

#[test]
fn gcd_zero_convention() {
    let mut inst = IpGcdInstance::with_vars(1);
    inst.add_gcd(GcdConstraint::new(p(&[(0, 1)], 0), p(&[], 0), Rel::Eq, 3));
    let sols = enumerate_solutions(&inst, &Window::cube(1, -3, 3).unwrap()).unwrap();
    assert_eq!(sols, vec![vec![-3], vec![3]]);
}

#[test]
fn rows_and_first_solution() {
    let mut inst = IpGcdInstance::with_vars(2);
    inst.add_row(Inequality::ge(&p(&[(0, 1), (1, 1)], 0), &p(&[], 5)));
    let w = Window::cube(2, 0, 5).unwrap();
    assert_eq!(first_solution(&inst, &w).unwrap(), Some(vec![0, 5]));
    assert_eq!(enumerate_solutions(&inst, &w).unwrap().len(), 21);
}

#[test]
fn window_cap_enforced() {
    let inst = IpGcdInstance::with_vars(3);
    let w = Window::cube(3, 0, 99).unwrap();
    assert_eq!(
        enumerate_solutions_capped(&inst, &w, 1000),
        Err(OracleError::WindowTooLarge { volume: 1_000_000, cap: 1000 })
    );
    assert!(Window::new(vec![1], vec![0]).is_err());
}

#[test]
fn best_point_for_both_senses() {
    let mut inst = IpGcdInstance::with_vars(1);
    inst.add_gcd(GcdConstraint::new(p(&[(0, 1)], 0), p(&[], 4), Rel::Eq, 2));
    inst.objective = Some(Objective { poly: p(&[(0, 1)], 0), sense: Sense::Minimize });
    let w = Window::cube(1, 3, 20).unwrap();
    assert_eq!(best_in_window(&inst, &w).unwrap(), Some((vec![6], 6)));
    inst.objective = Some(Objective { poly: p(&[(0, 1)], 0), sense: Sense::Maximize });
    assert_eq!(best_in_window(&inst, &w).unwrap(), Some((vec![18], 18)));
}

#[test]
fn residues_modulo_prime_powers() {
    let two_divides = DivSystem::from_constraints(vec![DivConstraint::new(p(&[], 2), p(&[(0, 1)], 0))]).unwrap();
    let s = enumerate_mod_p(&two_divides, 2, 2, 1000).unwrap().unwrap();
    assert!([0, 2].contains(&s[&0]));

    let odd = DivSystem::from_constraints(vec![DivConstraint::new(p(&[], 4), p(&[(0, 2)], 1))]).unwrap();
    assert_eq!(enumerate_mod_p(&odd, 2, 3, 1000).unwrap(), None);

    let shifted = DivSystem::from_constraints(vec![DivConstraint::new(p(&[(0, 1)], 1), p(&[(1, 1)], 0))]).unwrap();
    let s = enumerate_mod_p(&shifted, 5, 1, 1000).unwrap().unwrap();
    assert_ne!(s[&0], 4);
}
