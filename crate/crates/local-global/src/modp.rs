//! Solutions modulo a prime: validation, the easy-prime construction and a
//! bounded exhaustive search.

use std::collections::BTreeSet;

use divsys::{Assignment, DivSystem, LinearPoly, Var, VarOrder};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::LgError;

/// A solution of a system modulo `p` together with its largest left-hand
/// valuation `mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPSolution {
    pub p: BigInt,
    pub values: Assignment,
    pub mu: u64,
}

impl ModPSolution {
    /// Validates `values` against `phi` and records `mu`.
    pub fn new(phi: &DivSystem, p: BigInt, values: Assignment) -> Option<Self> {
        if !phi.vars().iter().all(|v| values.contains_key(v)) || !phi.is_mod_p_solution(&p, &values) {
            return None;
        }
        let mu = phi.mu(&p, &values)?;
        Some(ModPSolution { p, values, mu })
    }

    /// The prime power `p^(mu+1)`.
    pub fn modulus(&self) -> BigInt {
        num_traits::pow(self.p.clone(), self.mu as usize + 1)
    }
}

/// Modular inverse of `a` modulo `m` (which must be coprime to `a`).
pub(crate) fn inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "{a} is not invertible modulo {m}");
    e.x.mod_floor(m)
}

/// Residue of `var` that makes `h` vanish modulo `m`, after `h` has been
/// reduced to `c + a var`.
pub(crate) fn root_residue(h: &LinearPoly, var: Var, m: &BigInt) -> BigInt {
    let a = h.coeff(var);
    let c = h.constant_term();
    (-c * inverse(&a, m)).mod_floor(m)
}

/// Smallest residue in `[0, p)` outside `forbidden`.
pub(crate) fn smallest_free(p: &BigInt, forbidden: &BTreeSet<BigInt>) -> Option<BigInt> {
    let mut r = BigInt::zero();
    while &r < p {
        if !forbidden.contains(&r) {
            return Some(r);
        }
        r += 1;
    }
    None
}

/// Assigns the unbound variables of `order` one at a time, keeping every
/// left-hand side of `phi` non-zero modulo `p`. Values lie in `[0, p)`.
///
/// Requires that `p` divides no leading coefficient met on the way.
pub(crate) fn extend_avoiding_lhs_roots(phi: &DivSystem, order: &VarOrder, p: &BigInt, start: &Assignment) -> Option<Assignment> {
    let mut values = start.clone();
    let lhs: Vec<&LinearPoly> = phi.constraints().iter().map(|c| &c.lhs).collect();
    for &v in order.vars() {
        if values.contains_key(&v) {
            continue;
        }
        let mut forbidden = BTreeSet::new();
        for f in lhs.iter().filter(|f| order.lv(f) == Some(v)) {
            let g = f.partial_eval(&values);
            if g.coeff(v).is_multiple_of(p) {
                return None;
            }
            forbidden.insert(root_residue(&g, v, p));
        }
        values.insert(v, smallest_free(p, &forbidden)?);
    }
    Some(values)
}

/// Solution modulo a prime outside `pdiff(phi)` with every left-hand side a
/// unit modulo `p`, built along `order`.
pub fn solve_mod_easy_prime_with_order(phi: &DivSystem, p: &BigInt, order: &VarOrder) -> Result<ModPSolution, LgError> {
    if divsys::pdiff(phi, false)?.contains(p) {
        return Err(LgError::NotEasyPrime(p.clone()));
    }
    let values = extend_avoiding_lhs_roots(phi, order, p, &Assignment::new()).ok_or_else(|| LgError::NoModPSolution(p.clone()))?;
    ModPSolution::new(phi, p.clone(), values).ok_or_else(|| LgError::InvariantViolated(format!("easy-prime solution modulo {p} fails")))
}

/// [`solve_mod_easy_prime_with_order`] along the system's own variable order.
pub fn solve_mod_easy_prime(phi: &DivSystem, p: &BigInt) -> Result<ModPSolution, LgError> {
    let order = VarOrder::new(phi.vars().to_vec())?;
    solve_mod_easy_prime_with_order(phi, p, &order)
}

/// Exhaustive search of residues modulo `p^k` for `k = 1..=max_exponent`,
/// in lexicographic order. Returns `None` when nothing qualifies.
///
/// # Errors
/// `SearchBudgetExceeded` when `(p^k)^vars` exceeds `cap`.
pub fn find_mod_p_solution(phi: &DivSystem, p: &BigInt, max_exponent: u32, cap: u64) -> Result<Option<ModPSolution>, LgError> {
    let vars = phi.vars().to_vec();
    for k in 1..=max_exponent.max(1) {
        let m = num_traits::pow(p.clone(), k as usize);
        let space = num_traits::pow(m.clone(), vars.len());
        if space > BigInt::from(cap) {
            return Err(LgError::SearchBudgetExceeded(space));
        }
        let m_small = m.to_u64().expect("bounded by cap");
        let total = space.to_u64().expect("bounded by cap");
        for idx in 0..total {
            let mut rest = idx;
            let mut values = Assignment::new();
            for v in vars.iter().rev() {
                values.insert(*v, BigInt::from(rest % m_small));
                rest /= m_small;
            }
            if let Some(s) = ModPSolution::new(phi, p.clone(), values) {
                return Ok(Some(s));
            }
        }
    }
    Ok(None)
}
