//! p-adic valuations.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::NumError;

/// A p-adic valuation, where zero has valuation [`Valuation::Infinite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(k) => Some(k),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(k) => write!(f, "{k}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Largest `k` with `p^k | n`.
///
/// # Errors
/// `ZeroValuation` for `n = 0`.
pub fn vp(n: &BigInt, p: &BigInt) -> Result<u64, NumError> {
    if n.is_zero() {
        return Err(NumError::ZeroValuation);
    }
    assert!(*p > BigInt::from(1), "valuation base must exceed 1");
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return Ok(k);
        }
        n = q;
        k += 1;
    }
}

/// Valuation with zero mapped to infinity.
pub fn valuation(n: &BigInt, p: &BigInt) -> Valuation {
    match vp(n, p) {
        Ok(k) => Valuation::Finite(k),
        Err(_) => Valuation::Infinite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        let b = BigInt::from;
        assert_eq!(vp(&b(12), &b(2)), Ok(2));
        assert_eq!(vp(&b(12), &b(5)), Ok(0));
        assert_eq!(vp(&b(-250), &b(5)), Ok(3));
        assert_eq!(vp(&b(0), &b(5)), Err(NumError::ZeroValuation));
        assert_eq!(valuation(&b(0), &b(3)), Valuation::Infinite);
        assert!(Valuation::Finite(100) < Valuation::Infinite);
    }
}
