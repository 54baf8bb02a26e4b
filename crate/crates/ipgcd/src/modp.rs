//! Solutions of triple systems modulo a prime.
//!
//! Only the `y` residues modulo `p^(μ+1)` are searched; `z` and `w` values
//! follow from them in closed form.

use std::collections::BTreeMap;

use divsys::{Assignment, DivConstraint, LinearPoly, Var};
use local_global::ModPSolution;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use numthy::vp;

use crate::error::IpError;
use crate::triples::{GcdToDivTriple, Role};

struct WPair {
    f: LinearPoly,
    g: LinearPoly,
    c: BigInt,
}

/// Constants of the system and the closed-form rules for `z` and `w`.
struct Shape {
    constants: Vec<BigInt>,
    z: BTreeMap<Var, BigInt>,
    w: BTreeMap<Var, WPair>,
}

fn shape(t: &GcdToDivTriple) -> Result<Shape, IpError> {
    let bad = |msg: String| IpError::InvalidInstance(format!("not a triple system: {msg}"));
    let mut constants = Vec::new();
    let mut z = BTreeMap::new();
    let mut halves: BTreeMap<Var, (Option<LinearPoly>, Option<(LinearPoly, BigInt)>)> = BTreeMap::new();
    for con in t.psi.constraints() {
        let w: Vec<Var> = con.rhs.vars().filter(|v| t.roles[*v] == Role::W).collect();
        let zs: Vec<Var> = con.lhs.vars().filter(|v| t.roles[*v] == Role::Z).collect();
        match (zs.as_slice(), w.as_slice()) {
            ([], [w]) => {
                let c = con.rhs.constant_term().clone();
                let slot = halves.entry(*w).or_default();
                if c.is_zero() {
                    slot.0 = Some(con.lhs.clone());
                } else {
                    constants.push(c.clone());
                    slot.1 = Some((con.lhs.clone(), c));
                }
            }
            ([zv], []) => {
                let c = con.lhs.constant_term().clone();
                constants.push(c.clone());
                z.insert(*zv, c);
            }
            ([], []) if con.lhs.is_constant() => constants.push(con.lhs.constant_term().clone()),
            _ => return Err(bad(con.to_string())),
        }
    }
    let mut wmap = BTreeMap::new();
    for (v, pair) in halves {
        match pair {
            (Some(f), Some((g, c))) => {
                wmap.insert(v, WPair { f, g, c });
            }
            _ => return Err(bad(format!("w variable {v} lacks its pair"))),
        }
    }
    Ok(Shape { constants, z, w: wmap })
}

/// `(d+1)·|psi|^3·p^2`.
pub fn triple_mod_p_bound(t: &GcdToDivTriple, p: &BigInt) -> BigInt {
    BigInt::from(t.psi.vars().len() + 1) * num_traits::pow(t.psi.norm(), 3) * p * p
}

/// A solution of `t.psi` modulo `p`, or `None` when there is none.
///
/// The `y` residues are searched depth first in lexicographic order; each
/// constraint is checked as soon as the `y` variables it depends on are set.
///
/// # Errors
/// `SearchBudgetExceeded` when more than `cap` partial assignments are visited.
pub fn solve_triple_mod_p(t: &GcdToDivTriple, p: &BigInt, cap: u64) -> Result<Option<ModPSolution>, IpError> {
    let sh = shape(t)?;
    let mut mu = 0;
    for c in &sh.constants {
        mu = mu.max(vp(c, p)?);
    }
    let modulus = num_traits::pow(p.clone(), mu as usize + 1);
    let ys: Vec<Var> = t.psi.vars().iter().copied().filter(|v| t.roles[*v] == Role::Y).collect();
    let size = num_traits::pow(modulus.clone(), ys.len());
    let pos: BTreeMap<Var, usize> = ys.iter().enumerate().map(|(i, v)| (*v, i + 1)).collect();
    let level = |polys: &[&LinearPoly]| polys.iter().flat_map(|f| f.vars()).filter_map(|v| pos.get(&v).copied()).max().unwrap_or(0);
    let mut search = Search {
        p,
        modulus: &modulus,
        pairs: vec![Vec::new(); ys.len() + 1],
        checks: vec![Vec::new(); ys.len() + 1],
        nu: t.psi.vars().iter().map(|v| (*v, BigInt::zero())).collect(),
        ys: &ys,
        m: 0,
        visited: 0,
        cap,
    };
    let mut pair_level = BTreeMap::new();
    for (wv, pair) in &sh.w {
        let lift = num_traits::pow(p.clone(), vp(&pair.c, p)? as usize + 1);
        let l = level(&[&pair.f, &pair.g]);
        pair_level.insert(*wv, l);
        search.pairs[l].push((*wv, pair, lift));
    }
    for con in t.psi.constraints() {
        // a constant lhs only sees the rhs modulo p^(v_p(lhs))
        let rhs = if con.lhs.is_constant() {
            let q = num_traits::pow(p.clone(), vp(con.lhs.constant_term(), p)? as usize);
            let kept: Vec<(Var, BigInt)> = con.rhs.coeffs().iter().filter(|(_, a)| !a.is_multiple_of(&q)).map(|(v, a)| (*v, a.clone())).collect();
            LinearPoly::new(kept, con.rhs.constant_term().clone())
        } else {
            con.rhs.clone()
        };
        let ws = con.lhs.vars().chain(rhs.vars()).filter_map(|v| pair_level.get(&v).copied());
        let l = ws.fold(level(&[&con.lhs, &rhs]), usize::max);
        search.checks[l].push(con);
    }
    for (zv, c) in &sh.z {
        search.nu.insert(*zv, BigInt::from(c.is_multiple_of(p) as u8));
    }
    search.m = match modulus.to_u64() {
        Some(m) => m,
        None => return Err(IpError::SearchBudgetExceeded { stage: "triple solution modulo p", size }),
    };
    match search.descend(0) {
        Some(true) => Ok(ModPSolution::new(&t.psi, p.clone(), search.nu)),
        Some(false) => Ok(None),
        None => Err(IpError::SearchBudgetExceeded { stage: "triple solution modulo p", size }),
    }
}

struct Search<'a> {
    p: &'a BigInt,
    modulus: &'a BigInt,
    pairs: Vec<Vec<(Var, &'a WPair, BigInt)>>,
    checks: Vec<Vec<&'a DivConstraint>>,
    nu: Assignment,
    ys: &'a [Var],
    m: u64,
    visited: u64,
    cap: u64,
}

impl Search<'_> {
    /// `None` once the visit budget is spent.
    fn descend(&mut self, depth: usize) -> Option<bool> {
        self.visited += 1;
        if self.visited > self.cap {
            return None;
        }
        for (wv, pair, lift) in &self.pairs[depth] {
            let fv = pair.f.eval(&self.nu);
            let value = if fv.is_multiple_of(lift) { self.modulus * fv } else { self.modulus * pair.g.eval(&self.nu) - &pair.c };
            self.nu.insert(*wv, value);
        }
        if !self.checks[depth].iter().all(|c| c.holds_mod_p(self.p, &self.nu)) {
            return Some(false);
        }
        if depth == self.ys.len() {
            return Some(true);
        }
        for d in 0..self.m {
            self.nu.insert(self.ys[depth], BigInt::from(d));
            if self.descend(depth + 1)? {
                return Some(true);
            }
        }
        Some(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use divsys::{DivConstraint, DivSystem};
    use int_linalg::Matrix;
    use num_traits::Signed;

    fn triple(cons: Vec<DivConstraint>, roles: Vec<Role>) -> GcdToDivTriple {
        let n = roles.len();
        GcdToDivTriple {
            psi: DivSystem::new((0..n).collect(), cons).unwrap(),
            u: vec![],
            e: Matrix::zeros(0, n),
            roles,
        }
    }

    fn p(t: &[(Var, i64)], c: i64) -> LinearPoly {
        LinearPoly::from_i64(t, c)
    }

    #[test]
    fn constant_divisor_of_shifted_y() {
        let t = triple(vec![DivConstraint::new(p(&[], 2), p(&[(0, 1)], 1))], vec![Role::Y]);
        let s = solve_triple_mod_p(&t, &BigInt::from(2), 1000).unwrap().unwrap();
        assert_eq!(s.values[&0], BigInt::from(1));
    }

    #[test]
    fn odd_polynomial_never_divisible_by_four() {
        let t = triple(vec![DivConstraint::new(p(&[], 4), p(&[(0, 2)], 1))], vec![Role::Y]);
        assert_eq!(solve_triple_mod_p(&t, &BigInt::from(2), 1000).unwrap(), None);
    }

    #[test]
    fn bezout_block_within_bound() {
        // 2 | y0, 2 | y1, y0 | w, y1 | w + 2 with constants shifted to keep lhs positive
        let t = triple(
            vec![
                DivConstraint::new(p(&[], 2), p(&[(0, 1)], 2)),
                DivConstraint::new(p(&[], 2), p(&[(1, 1)], 4)),
                DivConstraint::new(p(&[(0, 1)], 2), p(&[(2, 1)], 0)),
                DivConstraint::new(p(&[(1, 1)], 4), p(&[(2, 1)], 2)),
            ],
            vec![Role::Y, Role::Y, Role::W],
        );
        for q in [2, 3, 5] {
            let q = BigInt::from(q);
            let s = solve_triple_mod_p(&t, &q, 100_000).unwrap().unwrap();
            let bound = triple_mod_p_bound(&t, &q);
            assert!(s.values.values().all(|v| v.abs() <= bound));
        }
    }

    #[test]
    fn budget_reported() {
        let t = triple(vec![DivConstraint::new(p(&[], 8), p(&[(0, 2), (1, 2)], 1))], vec![Role::Y, Role::Y]);
        assert!(matches!(solve_triple_mod_p(&t, &BigInt::from(2), 10), Err(IpError::SearchBudgetExceeded { .. })));
    }
}
