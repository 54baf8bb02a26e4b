//! The difficult-prime sets of a divisibility system.

use std::collections::BTreeSet;

use int_linalg::min_positive_multiplier;
use num_bigint::BigInt;
use num_traits::Zero;
use numthy::{prime_divisors, primes_up_to, NumError};

use crate::module::module_span;
use crate::poly::LinearPoly;
use crate::sterms::{delta, s_closure, sterms};
use crate::system::{DivSystem, VarOrder};

fn primes_of_poly(f: &LinearPoly, out: &mut BTreeSet<BigInt>) -> Result<(), NumError> {
    for n in f.coeffs().values().chain(std::iter::once(f.constant_term())) {
        if !n.is_zero() {
            out.extend(prime_divisors(n)?);
        }
    }
    Ok(())
}

fn primes_up_to_big(n: usize) -> impl Iterator<Item = BigInt> {
    primes_up_to(n as u64).into_iter().map(BigInt::from)
}

/// Primes `p <= m` together with the primes dividing a non-zero number of a
/// left-hand side (of any polynomial when `wide` is set).
pub fn pdiff(phi: &DivSystem, wide: bool) -> Result<BTreeSet<BigInt>, NumError> {
    let mut out: BTreeSet<BigInt> = primes_up_to_big(phi.len()).collect();
    for c in phi.constraints() {
        primes_of_poly(&c.lhs, &mut out)?;
        if wide {
            primes_of_poly(&c.rhs, &mut out)?;
        }
    }
    Ok(out)
}

/// The three constituents of [`pzero`], kept apart for diagnostics.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PzeroParts {
    /// Primes up to the size of the S-closure of the S-terms.
    pub small: BTreeSet<BigInt>,
    /// Primes dividing a number in that closure.
    pub numbers: BTreeSet<BigInt>,
    /// Primes dividing the least positive multiplier of an S-term of `f`
    /// into the module of `f`.
    pub multipliers: BTreeSet<BigInt>,
    /// The primes of [`pdiff`], included so that it is always a subset.
    pub difficult: BTreeSet<BigInt>,
    /// Cardinality of the S-closure.
    pub closure_size: usize,
}

impl PzeroParts {
    pub fn union(&self) -> BTreeSet<BigInt> {
        self.small.iter().chain(&self.numbers).chain(&self.multipliers).chain(&self.difficult).cloned().collect()
    }
}

pub fn pzero_parts(phi: &DivSystem, order: &VarOrder) -> Result<PzeroParts, NumError> {
    let closure = s_closure(&delta(phi, order), order);
    let mut parts = PzeroParts { closure_size: closure.len(), ..Default::default() };
    parts.small = primes_up_to_big(closure.len()).collect();
    for h in &closure {
        primes_of_poly(h, &mut parts.numbers)?;
    }
    let rows = order.rows();
    for f in phi.term_primitive_parts() {
        let gens: Vec<Vec<BigInt>> = module_span(phi, &f).generators(phi).iter().map(|h| h.to_column(&rows)).collect();
        for g in sterms(phi, &f, order) {
            if let Some(lambda) = min_positive_multiplier(&g.to_column(&rows), &gens) {
                parts.multipliers.extend(prime_divisors(&lambda)?);
            }
        }
    }
    parts.difficult = pdiff(phi, false)?;
    Ok(parts)
}

/// Primes influencing the construction of an integer solution; requires
/// the elimination property for `order`.
pub fn pzero(phi: &DivSystem, order: &VarOrder) -> Result<BTreeSet<BigInt>, NumError> {
    pzero_parts(phi, order).map(|p| p.union())
}
