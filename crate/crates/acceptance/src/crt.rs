//! Mixed congruence systems.

use num_bigint::BigInt;
use num_integer::Integer;
use numthy::{ecrtf, primes_up_to, solve_mixed_crt, CongruenceSystem};

use crate::gen::{crt_draw, draw, runner, CrtDraw};
use crate::{Tally, Verdict};

/// Keeps pairwise coprime moduli and primes above `d` that divide none of them.
fn system(c: &CrtDraw) -> CongruenceSystem {
    let mut congruences: Vec<(BigInt, BigInt)> = Vec::new();
    for (m, a) in &c.moduli {
        if congruences.iter().all(|(n, _)| n.gcd(&BigInt::from(*m)) == BigInt::from(1)) {
            congruences.push((BigInt::from(*m), BigInt::from(a % m)));
        }
    }
    let candidates: Vec<u64> = primes_up_to(100).into_iter().filter(|q| *q as usize > c.d).collect();
    let mut noncongruences: Vec<(BigInt, Vec<BigInt>)> = Vec::new();
    for (k, idx) in c.primes.iter().enumerate() {
        let q = BigInt::from(candidates[idx % candidates.len()]);
        if congruences.iter().any(|(m, _)| m.is_multiple_of(&q)) || noncongruences.iter().any(|(p, _)| *p == q) {
            continue;
        }
        let forbidden = c.forbidden[k][..c.d].iter().map(|r| BigInt::from(*r).mod_floor(&q)).collect();
        noncongruences.push((q, forbidden));
    }
    CongruenceSystem { congruences, noncongruences, anchor: BigInt::from(c.anchor) }
}

pub fn mixed_crt() -> Verdict {
    let mut r = runner(3);
    let strategy = crt_draw();
    let mut t = Tally::default();
    let mut steps = BigInt::from(0);
    for i in 0..1000 {
        let c = draw(&mut r, &strategy);
        let sys = system(&c);
        t.checked += 1;
        let x = match solve_mixed_crt(&sys) {
            Ok(x) => x,
            Err(e) => {
                t.fail(format!("system {i}: {e} on {sys:?}"));
                continue;
            }
        };
        let modulus: BigInt = sys.congruences.iter().map(|(m, _)| m.clone()).product();
        let q = sys.noncongruences.len().max(1) as u64;
        let limit = &sys.anchor + &modulus * ecrtf(q, c.d as u64);
        t.ensure(sys.satisfied_by(&x) && x >= sys.anchor && x <= limit, || format!("system {i}: {x} invalid for {sys:?}"));
        // every earlier lattice point at or above the anchor must fail
        let first = &x - (&x - &sys.anchor).div_floor(&modulus) * &modulus;
        let mut y = first;
        while y < x {
            if sys.satisfied_by(&y) {
                t.fail(format!("system {i}: {y} < {x} also satisfies {sys:?}"));
                break;
            }
            y += &modulus;
            steps += 1;
        }
    }
    t.verdict(format!("1000 systems, {steps} earlier lattice points rejected"))
}
