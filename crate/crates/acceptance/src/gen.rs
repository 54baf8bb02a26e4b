//! Seeded random corpora.

use divsys::{DivConstraint, DivSystem, LinearPoly};
use ipgcd::{GcdConstraint, Inequality, IpGcdInstance, Objective, Rel, Sense};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, TestRng, TestRunner};

/// A runner whose draws depend only on `seed`.
pub fn runner(seed: u8) -> TestRunner {
    TestRunner::new_with_rng(Config::default(), TestRng::from_seed(proptest::test_runner::RngAlgorithm::ChaCha, &[seed; 32]))
}

pub fn draw<S: Strategy>(r: &mut TestRunner, s: &S) -> S::Value {
    s.new_tree(r).expect("strategy yields a value").current()
}

/// A polynomial over `0..n`; each coefficient is zero half the time.
pub fn sparse_poly(n: usize, coef: i64, constant: i64) -> impl Strategy<Value = LinearPoly> {
    let c = prop_oneof![Just(0i64), -coef..=coef];
    (prop::collection::vec(c, n), -constant..=constant).prop_map(|(a, k)| {
        let terms: Vec<(usize, i64)> = a.into_iter().enumerate().collect();
        LinearPoly::from_i64(&terms, k)
    })
}

pub fn rel() -> impl Strategy<Value = Rel> {
    prop_oneof![Just(Rel::Le), Just(Rel::Eq), Just(Rel::Ne), Just(Rel::Ge)]
}

fn gcd(n: usize) -> impl Strategy<Value = GcdConstraint> {
    (sparse_poly(n, 5, 5), sparse_poly(n, 5, 5), rel(), 1i64..=6).prop_map(|(f, g, r, c)| GcdConstraint::new(f, g, r, c))
}

/// Up to three variables boxed to `[-radius, radius]`, up to two extra rows
/// and up to two GCD constraints, coefficients in `[-5, 5]`.
pub fn boxed_instance(radius: i64) -> impl Strategy<Value = IpGcdInstance> {
    (1usize..=3).prop_flat_map(move |n| {
        (prop::collection::vec(sparse_poly(n, 5, 20), 0..=2), prop::collection::vec(gcd(n), 0..=2)).prop_map(move |(rows, gcds)| {
            let mut inst = IpGcdInstance::with_vars(n);
            for v in 0..n {
                inst.bound_var(v, -radius, radius);
            }
            inst.rows.extend(rows.into_iter().map(|poly| Inequality { poly }));
            inst.gcds = gcds;
            inst
        })
    })
}

/// A divisibility system over `0..n` with `1..=max_m` constraints.
pub fn div_system(max_n: usize, max_m: usize, coef: i64) -> impl Strategy<Value = DivSystem> {
    (1..=max_n).prop_flat_map(move |n| {
        let con = (sparse_poly(n, coef, coef), sparse_poly(n, coef, coef)).prop_filter("non-zero lhs", |(f, _)| !f.is_zero());
        prop::collection::vec(con, 1..=max_m).prop_map(move |cs| {
            DivSystem::new((0..n).collect(), cs.into_iter().map(|(f, g)| DivConstraint::new(f, g)).collect())
                .expect("variables in range")
        })
    })
}

/// Three-variable systems whose divisors only use earlier variables and
/// whose dividends are led by a unit multiple of a later one.
pub fn chained_system() -> impl Strategy<Value = DivSystem> {
    let con = |lead: usize| {
        (sparse_poly(lead, 2, 3), sparse_poly(lead, 2, 3), any::<bool>()).prop_map(move |(f, g, neg)| {
            let f = if f.is_zero() { LinearPoly::constant(2) } else { f };
            DivConstraint::new(f, g.add(&LinearPoly::term(lead, if neg { -1 } else { 1 })))
        })
    };
    (con(1), con(2), con(2), 1usize..=3).prop_map(|(a, b, c, k)| {
        DivSystem::new(vec![0, 1, 2], [a, b, c].into_iter().take(k).collect()).expect("variables in range")
    })
}

/// Inequality rows `a x <= b` over `d` variables.
pub fn inequality_rows(max_d: usize, max_rows: usize) -> impl Strategy<Value = (usize, Vec<(Vec<i64>, i64)>)> {
    (1..=max_d).prop_flat_map(move |d| {
        (Just(d), prop::collection::vec((prop::collection::vec(-3i64..=3, d), -6i64..=6), 1..=max_rows))
    })
}

/// Raw material for a mixed congruence system; see [`crate::crt`].
#[derive(Clone, Debug)]
pub struct CrtDraw {
    pub d: usize,
    pub moduli: Vec<(u64, u64)>,
    pub primes: Vec<usize>,
    pub forbidden: Vec<Vec<u64>>,
    pub anchor: i64,
}

pub fn crt_draw() -> impl Strategy<Value = CrtDraw> {
    (
        1usize..=3,
        prop::collection::vec((2u64..=50, 0u64..50), 0..=3),
        prop::collection::vec(0usize..25, 0..=4),
        prop::collection::vec(prop::collection::vec(0u64..100, 3), 4),
        -500i64..=500,
    )
        .prop_map(|(d, moduli, primes, forbidden, anchor)| CrtDraw { d, moduli, primes, forbidden, anchor })
}

/// Bounds per variable: `(lower, upper)`, either possibly absent.
pub type Bounds = Vec<(Option<i64>, Option<i64>)>;

fn bound() -> impl Strategy<Value = (Option<i64>, Option<i64>)> {
    prop_oneof![
        3 => (-20i64..=0, 0i64..=20).prop_map(|(l, u)| (Some(l), Some(u))),
        1 => (-20i64..=20).prop_map(|l| (Some(l), None)),
        1 => (-20i64..=20).prop_map(|u| (None, Some(u))),
        1 => Just((None, None)),
    ]
}

/// An instance with an objective and possibly open bounds.
pub fn objective_instance() -> impl Strategy<Value = (IpGcdInstance, Bounds)> {
    (1usize..=3).prop_flat_map(|n| {
        let obj = sparse_poly(n, 5, 0).prop_filter("non-constant objective", |p| !p.is_constant());
        (
            prop::collection::vec(bound(), n),
            prop::collection::vec(sparse_poly(n, 5, 20), 0..=1),
            prop::collection::vec(gcd(n), 0..=2),
            obj,
            any::<bool>(),
        )
            .prop_map(move |(bounds, rows, gcds, poly, min)| {
                let mut inst = IpGcdInstance::with_vars(n);
                for (v, (l, u)) in bounds.iter().enumerate() {
                    let x = LinearPoly::var(v);
                    if let Some(l) = l {
                        inst.rows.push(Inequality::ge(&x, &LinearPoly::constant(*l)));
                    }
                    if let Some(u) = u {
                        inst.rows.push(Inequality::le(&x, &LinearPoly::constant(*u)));
                    }
                }
                inst.rows.extend(rows.into_iter().map(|poly| Inequality { poly }));
                inst.gcds = gcds;
                inst.objective = Some(Objective { poly, sense: if min { Sense::Minimize } else { Sense::Maximize } });
                (inst, bounds)
            })
    })
}

/// Instances over one or two variables with few rows, so that cones are
/// usually unbounded and triples carry divisibilities.
pub fn open_instance() -> impl Strategy<Value = IpGcdInstance> {
    (1usize..=2).prop_flat_map(|n| {
        (prop::collection::vec(sparse_poly(n, 3, 6), 0..=2), prop::collection::vec(gcd(n), 1..=2)).prop_map(move |(rows, gcds)| {
            let mut inst = IpGcdInstance::with_vars(n);
            inst.rows = rows.into_iter().map(|poly| Inequality { poly }).collect();
            inst.gcds = gcds;
            inst
        })
    })
}
