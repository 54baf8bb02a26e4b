mod common;

use std::collections::BTreeSet;

use common::*;
use divsys::pdiff;
use ipgcd::*;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use oracle::{enumerate_mod_p, enumerate_solutions, Window};
use proptest::prelude::*;

fn solutions(inst: &IpGcdInstance, r: i128) -> BTreeSet<Vec<i128>> {
    enumerate_solutions(inst, &Window::cube(inst.num_vars(), -r, r).unwrap()).unwrap().into_iter().collect()
}

fn cfg() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn normalize_preserves_solutions(inst in instance(2, 1, 2, None)) {
        let norm = normalize(&inst);
        prop_assert!(norm.gcds.iter().all(|g| as_var(&g.f).is_some() && as_var(&g.g).is_some()));
        let defs: Vec<_> = inst.gcds.iter().flat_map(|g| [&g.f, &g.g]).filter(|f| as_var(f).is_none()).cloned().collect();
        prop_assert_eq!(norm.num_vars(), 2 + defs.len());
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                let x = vec![BigInt::from(a), BigInt::from(b)];
                let at = inst.assignment(&x);
                let mut ext = x.clone();
                ext.extend(defs.iter().map(|f| f.eval(&at)));
                prop_assert_eq!(norm.is_satisfied_by(&ext), inst.is_satisfied_by(&x));
                for i in 2..ext.len() {
                    let mut off = ext.clone();
                    off[i] += 1;
                    prop_assert!(!norm.is_satisfied_by(&off));
                }
            }
        }
    }

    #[test]
    fn sign_split_is_a_partition_of_cases(inst in instance(2, 1, 2, None)) {
        let norm = normalize(&inst);
        let members = sign_split(&norm, 10_000).unwrap();
        let mut union = BTreeSet::new();
        for m in &members {
            prop_assert!(m.gcds.iter().all(|g| matches!(g.rel, Rel::Eq | Rel::Ge)));
            union.extend(solutions(m, 3));
        }
        prop_assert_eq!(union, solutions(&norm, 3));
    }

    #[test]
    fn decomposition_matches_integer_points(
        d in 1usize..=3,
        rows in prop::collection::vec((prop::collection::vec(-3i64..=3, 3), -6i64..=6), 0..=4),
    ) {
        let rows: Vec<(Vec<BigInt>, BigInt)> =
            rows.into_iter().map(|(a, b)| (a[..d].iter().map(|x| BigInt::from(*x)).collect(), BigInt::from(b))).collect();
        let cones = vzgs_decompose(&rows, d, DecomposeConfig::default()).unwrap();
        let bound = cone_norm_bound(&rows, d);
        for c in &cones {
            let (nu, ne) = c.norms();
            prop_assert!(nu <= bound && ne <= bound, "norms {} {} above {}", nu, ne, bound);
        }
        let mut inst = IpGcdInstance::with_vars(d);
        for (a, b) in &rows {
            let a: Vec<i64> = a.iter().map(|x| x.to_i64().unwrap()).collect();
            inst.add_row(Inequality { poly: poly(&a, -b.to_i64().unwrap()) });
        }
        let r = 6i64;
        let found: BTreeSet<Vec<i128>> = points_in_box(&cones, &vec![-r; d], &vec![r; d])
            .into_iter()
            .map(|x| x.into_iter().map(i128::from).collect())
            .collect();
        prop_assert_eq!(found, solutions(&inst, r as i128));
    }

    #[test]
    fn triples_keep_semantics_and_shape(inst in instance(2, 1, 1, None)) {
        let members = sign_split(&normalize(&inst), 10_000).unwrap();
        let n = inst.num_vars();
        let mut before = BTreeSet::new();
        let mut after = BTreeSet::new();
        for m in &members {
            let ts = to_triples(m, DecomposeConfig::default()).unwrap();
            for t in &ts {
                prop_assert!(t.check_invariants().is_ok(), "{:?}", t.check_invariants());
                prop_assert!(t.psi.len() <= 4 * m.gcds.len());
                prop_assert_eq!(is_three_increasing(t), non_increasing_witness(&t.psi).is_none());
            }
            before.extend(union_points(&ts, n, 4, 20));
            let forced = force_increasing(ts.clone(), 1_000_000).unwrap();
            for t in &forced {
                prop_assert!(t.check_invariants().is_ok(), "{:?}", t.check_invariants());
                prop_assert!(is_three_increasing(t));
            }
            after.extend(union_points(&forced, n, 4, 20));
        }
        let expected = solutions(&inst, 4);
        prop_assert_eq!(before, expected.clone());
        prop_assert_eq!(after, expected);
    }

    #[test]
    fn mod_p_solutions_are_small_and_absence_is_real(inst in instance(2, 1, 2, None)) {
        for m in sign_split(&normalize(&inst), 10_000).unwrap() {
            let ts = force_increasing(to_triples(&m, DecomposeConfig::default()).unwrap(), 1_000_000).unwrap();
            for t in ts.iter().take(4) {
                for p in pdiff(&t.psi, false).unwrap().into_iter().take(3) {
                    let s = solve_triple_mod_p(t, &p, 1_000_000).unwrap();
                    let pi = p.to_i128().unwrap();
                    match s {
                        Some(s) => {
                            let bound = triple_mod_p_bound(t, &p);
                            prop_assert!(s.values.values().all(|v| v.abs() <= bound));
                            prop_assert!(t.psi.is_mod_p_solution(&p, &s.values));
                        }
                        None => {
                            let mu = t.psi.constraints().iter()
                                .flat_map(|c| [c.lhs.constant_term().clone(), c.rhs.constant_term().clone()])
                                .filter(|c| c.is_positive())
                                .map(|c| numthy::vp(&c, &p).unwrap())
                                .max()
                                .unwrap_or(0);
                            let k = mu as u32 + 1;
                            if (pi.pow(k)).pow(t.psi.vars().len() as u32) <= 2_000_000 {
                                prop_assert_eq!(enumerate_mod_p(&t.psi, pi, k, 2_000_000).unwrap(), None);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn feasibility_agrees_with_enumeration(inst in instance(2, 2, 2, Some(8))) {
        let out = feasible(&inst, &IpConfig::default()).unwrap().outcome;
        let truth = solutions(&inst, 8);
        match out {
            SolveOutcome::Feasible(x) => {
                prop_assert!(inst.is_satisfied_by(&x));
                prop_assert!(!truth.is_empty());
            }
            SolveOutcome::Infeasible => prop_assert!(truth.is_empty()),
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }

    #[test]
    fn bounded_optimum_matches_enumeration(
        inst in instance(2, 1, 2, Some(6)),
        c in prop::collection::vec(-3i64..=3, 2),
        maximize in any::<bool>(),
    ) {
        let inst = with_objective(inst, &c, maximize);
        let out = optimize(&inst, &IpConfig::default()).unwrap().outcome;
        let best = oracle::best_in_window(&inst, &Window::cube(2, -6, 6).unwrap()).unwrap();
        match (out, best) {
            (SolveOutcome::Optimal(x, v), Some((_, bv))) => {
                prop_assert!(inst.is_satisfied_by(&x));
                prop_assert_eq!(v, BigInt::from(bv));
            }
            (SolveOutcome::Infeasible, None) => {}
            (o, b) => prop_assert!(false, "solver {:?} oracle {:?}", o, b),
        }
    }
}
