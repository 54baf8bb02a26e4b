use std::collections::BTreeSet;

use divsys::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

const VARS: usize = 3;

fn poly() -> impl Strategy<Value = LinearPoly> {
    (prop::collection::vec(-4i64..=4, VARS), -4i64..=4)
        .prop_map(|(cs, c)| LinearPoly::from_i64(&cs.iter().enumerate().map(|(v, a)| (v, *a)).collect::<Vec<_>>(), c))
}

fn system() -> impl Strategy<Value = DivSystem> {
    prop::collection::vec((poly(), poly()), 1..=3).prop_filter_map("non-zero lhs", |cs| {
        let cons: Option<Vec<DivConstraint>> =
            cs.into_iter().map(|(l, r)| (!l.is_zero()).then(|| DivConstraint::new(l, r))).collect();
        DivSystem::new((0..VARS).collect(), cons?).ok()
    })
}

fn order() -> VarOrder {
    VarOrder::new((0..VARS).collect()).unwrap()
}

fn window(radius: i64) -> Vec<Assignment> {
    let mut out = vec![Assignment::new()];
    for v in 0..VARS {
        out = out
            .into_iter()
            .flat_map(|a| (-radius..=radius).map(move |x| {
                let mut b = a.clone();
                b.insert(v, BigInt::from(x));
                b
            }))
            .collect();
    }
    out
}

fn solvable_mod(phi: &DivSystem, p: i64, k: u32) -> bool {
    let m = p.pow(k);
    window_nonneg(m).iter().any(|a| phi.is_mod_p_solution(&BigInt::from(p), a))
}

fn window_nonneg(m: i64) -> Vec<Assignment> {
    let mut out = vec![Assignment::new()];
    for v in 0..VARS {
        out = out
            .into_iter()
            .flat_map(|a| (0..m).map(move |x| {
                let mut b = a.clone();
                b.insert(v, BigInt::from(x));
                b
            }))
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn span_generators_are_implied(phi in system(), mix in prop::collection::vec(-3i64..=3, 8)) {
        let sols: Vec<Assignment> = window(5).into_iter().filter(|a| phi.is_satisfied_by(a)).collect();
        for f in phi.lhs_primitive_parts() {
            let gens = module_span(&phi, &f).generators(&phi);
            let combo = gens.iter().zip(&mix).fold(LinearPoly::zero(), |acc, (g, k)| acc.add(&g.scale(&BigInt::from(*k))));
            for a in &sols {
                let fa = f.eval(a);
                for g in gens.iter().chain(std::iter::once(&combo)) {
                    prop_assert!(!fa.is_zero() && g.eval(a).is_multiple_of(&fa), "{f} does not divide {g} at {a:?}");
                }
            }
        }
    }

    #[test]
    fn span_fixpoint_is_stable_and_bounded(phi in system()) {
        let bound = span_scalar_bound(&phi);
        for f in phi.lhs_primitive_parts() {
            let s = module_span(&phi, &f);
            prop_assert_eq!(module_span_from(&phi, &f, s.scalars.clone()), s.clone());
            prop_assert!(s.scalars.iter().all(|c| *c >= BigInt::zero() && *c <= bound));
        }
    }

    #[test]
    fn closure_preserves_solutions(phi in system()) {
        let psi = close_elimination(&phi, &order());
        prop_assert!(psi.len() <= phi.len() * (VARS + 2));
        for a in window(5) {
            prop_assert_eq!(phi.is_satisfied_by(&a), psi.is_satisfied_by(&a), "{:?}", a);
        }
        for (p, k) in [(2i64, 2u32), (3, 2), (5, 1)] {
            prop_assert_eq!(solvable_mod(&phi, p, k), solvable_mod(&psi, p, k));
        }
    }

    #[test]
    fn pdiff_is_inside_pzero(phi in system()) {
        let psi = close_elimination(&phi, &order());
        let pd: BTreeSet<BigInt> = pdiff(&psi, false).unwrap();
        prop_assert!(pd.is_subset(&pzero(&psi, &order()).unwrap()));
    }
}
