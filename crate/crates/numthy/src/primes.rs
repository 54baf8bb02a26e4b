//! Primality testing, prime enumeration and factorization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::NumError;

/// Bases for Miller-Rabin: the first 40 primes. The first 13 make the test
/// deterministic below 3.3e24; all 40 bound the error by 4^-40 beyond.
const WITNESSES: [u32; 40] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107,
    109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
];

/// Primality of `n`. Values below 2 are not prime.
pub fn is_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for &w in &WITNESSES {
        let w = BigInt::from(w);
        if *n == w {
            return true;
        }
        if n.is_multiple_of(&w) {
            return false;
        }
    }
    let one = BigInt::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'outer: for &w in &WITNESSES {
        let mut x = BigInt::from(w).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Convenience wrapper for machine integers.
pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigInt::from(n))
}

/// All primes `p <= n` by sieving.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

/// The smallest prime strictly greater than `n`.
pub fn next_prime(n: &BigInt) -> BigInt {
    let mut c = if *n < BigInt::from(2) { BigInt::from(2) } else { n + 1 };
    while !is_prime(&c) {
        c += 1;
    }
    c
}

/// Effort limits for [`factorize_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial division runs over all primes up to this bound.
    pub trial_bound: u64,
    /// Total number of rho iterations across all restarts.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { trial_bound: 10_000, rho_iterations: 16_000_000 }
    }
}

/// Prime factors of `|n|` with multiplicity, in ascending order.
pub fn factorize(n: &BigInt) -> Result<Vec<BigInt>, NumError> {
    factorize_with(n, FactorBudget::default())
}

/// Distinct prime factors of `|n|`, ascending.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<BigInt>, NumError> {
    let mut f = factorize(n)?;
    f.dedup();
    Ok(f)
}

/// Factorization under an explicit effort budget.
///
/// # Errors
/// `FactorizationBudgetExceeded` when the rho phase runs out of iterations.
/// Zero has no factorization and is rejected the same way.
pub fn factorize_with(n: &BigInt, budget: FactorBudget) -> Result<Vec<BigInt>, NumError> {
    if n.is_zero() {
        return Err(NumError::FactorizationBudgetExceeded { n: n.clone() });
    }
    let mut rest = n.abs();
    let mut out = Vec::new();
    for p in primes_up_to(budget.trial_bound) {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        while rest.is_multiple_of(&bp) {
            rest /= &bp;
            out.push(bp.clone());
        }
    }
    let mut remaining = budget.rho_iterations;
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            out.push(m);
            continue;
        }
        let r = m.sqrt();
        if &r * &r == m {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let d = brent(&m, &mut remaining).ok_or_else(|| NumError::FactorizationBudgetExceeded { n: n.clone() })?;
        stack.push(&m / &d);
        stack.push(d);
    }
    out.sort();
    Ok(out)
}

/// Pollard-Brent rho. Returns a non-trivial factor of composite `n`, or
/// `None` when the iteration allowance is spent.
fn brent(n: &BigInt, remaining: &mut u64) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    let one = BigInt::one();
    for c in 1u64.. {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let (mut y, m) = (BigInt::from(2), 128u64);
        let (mut g, mut r, mut q) = (one.clone(), 1u64, one.clone());
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = m.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                *remaining = remaining.checked_sub(steps)?;
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                *remaining = remaining.checked_sub(1)?;
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return Some(g);
        }
    }
    None
}

/// Product of a multiset of integers.
pub fn product(factors: &[BigInt]) -> BigInt {
    factors.iter().fold(BigInt::one(), |a, b| a * b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn primality() {
        assert!(!is_prime(&b(1)));
        assert!(is_prime(&b(2)));
        assert!(!is_prime(&b(561)));
        assert!(is_prime(&b(1_000_000_007)));
        assert!(!is_prime(&(b(1_000_000_007) * b(998_244_353))));
    }

    #[test]
    fn factorizations() {
        assert!(factorize(&b(1)).unwrap().is_empty());
        assert_eq!(factorize(&b(12)).unwrap(), vec![b(2), b(2), b(3)]);
        assert_eq!(factorize(&b(10403)).unwrap(), vec![b(101), b(103)]);
        let big = b(1_000_000_007) * b(998_244_353) * b(4);
        assert_eq!(factorize(&big).unwrap(), vec![b(2), b(2), b(998_244_353), b(1_000_000_007)]);
    }

    #[test]
    fn budget_is_enforced() {
        let n = b(1_000_000_007) * b(998_244_353);
        let tiny = FactorBudget { trial_bound: 10, rho_iterations: 5 };
        assert!(matches!(factorize_with(&n, tiny), Err(NumError::FactorizationBudgetExceeded { .. })));
    }

    #[test]
    fn sieve_and_successor() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(next_prime(&b(13)), b(17));
        assert_eq!(next_prime(&b(0)), b(2));
    }
}
