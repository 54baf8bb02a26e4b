//! Chinese remaindering, with and without non-congruences.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::NumError;
use crate::primes::is_prime;

/// A prime power `p^e` with `e >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: BigInt,
    e: u32,
}

impl PrimePower {
    pub fn new(p: BigInt, e: u32) -> Result<Self, NumError> {
        if !is_prime(&p) {
            return Err(NumError::NotPrime(p));
        }
        if e == 0 {
            return Err(NumError::InvalidSystem("prime power exponent must be positive".into()));
        }
        Ok(PrimePower { p, e })
    }

    pub fn prime(&self) -> &BigInt {
        &self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn value(&self) -> BigInt {
        num_traits::pow(self.p.clone(), self.e as usize)
    }
}

/// Solves `x = b_i (mod m_i)` for pairwise coprime positive moduli.
///
/// Returns `(a, M)` with `M` the product of the moduli and `0 <= a < M`.
pub fn crt_combine(congruences: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt), NumError> {
    let mut a = BigInt::zero();
    let mut m = BigInt::one();
    for (mi, bi) in congruences {
        if !mi.is_positive() {
            return Err(NumError::InvalidSystem(format!("modulus {mi} is not positive")));
        }
        let g = m.extended_gcd(mi);
        if !g.gcd.is_one() {
            let other = congruences.iter().map(|(x, _)| x).find(|x| !x.gcd(mi).is_one() && *x != mi);
            return Err(NumError::NotCoprime { a: other.cloned().unwrap_or_else(|| mi.clone()), b: mi.clone() });
        }
        // a + m t = bi (mod mi)  =>  t = (bi - a) m^{-1} (mod mi)
        let t = ((bi - &a) * &g.x).mod_floor(mi);
        a += &m * t;
        m *= mi;
        a = a.mod_floor(&m);
    }
    Ok((a, m))
}

/// Simultaneous congruences and per-prime forbidden residues, scanned from
/// an anchor.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CongruenceSystem {
    pub congruences: Vec<(BigInt, BigInt)>,
    pub noncongruences: Vec<(BigInt, Vec<BigInt>)>,
    pub anchor: BigInt,
}

impl CongruenceSystem {
    /// Checks coprimality of all moduli and that every non-congruence prime
    /// leaves at least one residue free.
    pub fn validate(&self) -> Result<(), NumError> {
        let mut moduli: Vec<&BigInt> = self.congruences.iter().map(|(m, _)| m).collect();
        for (q, forbidden) in &self.noncongruences {
            if !is_prime(q) {
                return Err(NumError::NotPrime(q.clone()));
            }
            let distinct: HashSet<BigInt> = forbidden.iter().map(|c| c.mod_floor(q)).collect();
            if BigInt::from(distinct.len()) >= *q {
                return Err(NumError::InvalidSystem(format!("prime {q} forbids every residue")));
            }
            moduli.push(q);
        }
        for (i, a) in moduli.iter().enumerate() {
            if !a.is_positive() {
                return Err(NumError::InvalidSystem(format!("modulus {a} is not positive")));
            }
            for b in &moduli[i + 1..] {
                if !a.gcd(b).is_one() {
                    return Err(NumError::NotCoprime { a: (*a).clone(), b: (*b).clone() });
                }
            }
        }
        Ok(())
    }

    /// Largest number of forbidden residues attached to one prime (at least 1).
    pub fn max_forbidden(&self) -> usize {
        self.noncongruences.iter().map(|(_, c)| c.len()).max().unwrap_or(1).max(1)
    }

    /// Whether `x` satisfies every congruence and non-congruence.
    pub fn satisfied_by(&self, x: &BigInt) -> bool {
        self.congruences.iter().all(|(m, b)| (x - b).is_multiple_of(m))
            && self.noncongruences.iter().all(|(q, cs)| cs.iter().all(|c| !(x - c).is_multiple_of(q)))
    }
}

/// Upper bound on the number of lattice steps needed to meet every
/// non-congruence: `((d+1) q)^ceil(4 (d+1)^2 (3 + ln ln (q+1)))`.
pub fn ecrtf(q_count: u64, d: u64) -> BigInt {
    assert!(q_count >= 1 && d >= 1, "ecrtf needs positive arguments");
    let d1 = (d + 1) as f64;
    let q = q_count as f64;
    let exponent = (4.0 * d1 * d1 * (3.0 + (q + 1.0).ln().ln())).ceil();
    let base = BigInt::from((d + 1) * q_count);
    num_traits::pow(base, exponent as usize)
}

/// Least `x >= anchor` satisfying the system.
pub fn solve_mixed_crt(sys: &CongruenceSystem) -> Result<BigInt, NumError> {
    solve_mixed_crt_counted(sys).map(|(x, _)| x)
}

/// Like [`solve_mixed_crt`], also returning the number of lattice points tried.
pub fn solve_mixed_crt_counted(sys: &CongruenceSystem) -> Result<(BigInt, u64), NumError> {
    sys.validate()?;
    let (a, m) = crt_combine(&sys.congruences)?;
    let mut x = &sys.anchor + (&a - &sys.anchor).mod_floor(&m);
    let q_count = sys.noncongruences.len().max(1) as u64;
    let window = ecrtf(q_count, sys.max_forbidden() as u64);
    // Residues of x modulo each small prime, advanced by the residue of m.
    let mut tracks: Vec<(u64, u64, u64, HashSet<u64>)> = Vec::new();
    let mut big_tracks: Vec<(&BigInt, &Vec<BigInt>)> = Vec::new();
    for (q, cs) in &sys.noncongruences {
        match q.to_u64().filter(|&qs| qs < u32::MAX as u64) {
            Some(qs) => {
                let small = |v: &BigInt| v.mod_floor(q).to_u64().expect("residue below q");
                tracks.push((qs, small(&x), small(&m), cs.iter().map(small).collect()));
            }
            None => big_tracks.push((q, cs)),
        }
    }
    let mut steps: u64 = 0;
    loop {
        steps += 1;
        let small_ok = tracks.iter().all(|(_, xr, _, forb)| !forb.contains(xr));
        if small_ok && big_tracks.iter().all(|(q, cs)| cs.iter().all(|c| !(&x - c).is_multiple_of(q))) {
            return Ok((x, steps));
        }
        if BigInt::from(steps) > window {
            return Err(NumError::WindowExhausted { steps: window });
        }
        x += &m;
        for (q, xr, step, _) in tracks.iter_mut() {
            *xr = (*xr + *step) % *q;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn classic_crt() {
        assert_eq!(crt_combine(&[(b(2), b(0)), (b(3), b(0))]).unwrap(), (b(0), b(6)));
        assert_eq!(crt_combine(&[(b(3), b(2)), (b(5), b(3))]).unwrap(), (b(8), b(15)));
        assert!(matches!(crt_combine(&[(b(4), b(1)), (b(6), b(1))]), Err(NumError::NotCoprime { .. })));
        assert_eq!(crt_combine(&[]).unwrap(), (b(0), b(1)));
    }

    #[test]
    fn bound_for_one_prime_one_residue() {
        assert_eq!(ecrtf(1, 1), num_traits::pow(b(2), 43));
        assert!(ecrtf(2, 1) >= ecrtf(1, 1));
    }

    #[test]
    fn mixed_examples() {
        let sys = CongruenceSystem {
            congruences: vec![(b(3), b(1))],
            noncongruences: vec![(b(5), vec![b(2), b(3)])],
            anchor: b(0),
        };
        assert_eq!(solve_mixed_crt(&sys).unwrap(), b(1));
        let sys = CongruenceSystem { congruences: vec![], noncongruences: vec![(b(3), vec![b(0)])], anchor: b(0) };
        assert_eq!(solve_mixed_crt(&sys).unwrap(), b(1));
    }

    #[test]
    fn rejects_saturated_prime() {
        let sys = CongruenceSystem { congruences: vec![], noncongruences: vec![(b(2), vec![b(0), b(1)])], anchor: b(0) };
        assert!(matches!(solve_mixed_crt(&sys), Err(NumError::InvalidSystem(_))));
    }
}
