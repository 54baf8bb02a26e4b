//! Windowed brute-force enumeration, used as ground truth in tests.
//!
//! Arithmetic is done in `i128` with its own gcd and valuation, so results
//! do not share code paths with the solvers they check.

use std::collections::BTreeMap;

use divsys::{DivSystem, LinearPoly, Var};
use ipgcd::{IpGcdInstance, Rel};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

/// Default largest number of points an enumeration may visit.
pub const DEFAULT_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("window of {volume} points exceeds the cap of {cap}")]
    WindowTooLarge { volume: u128, cap: u128 },
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("coefficient does not fit in 128 bits")]
    Overflow,
}

/// Inclusive bounds per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    lo: Vec<i128>,
    hi: Vec<i128>,
}

impl Window {
    pub fn new(lo: Vec<i128>, hi: Vec<i128>) -> Result<Self, OracleError> {
        if lo.len() != hi.len() {
            return Err(OracleError::InvalidWindow("bound vectors differ in length".into()));
        }
        if let Some(i) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
            return Err(OracleError::InvalidWindow(format!("lower bound above upper bound at {i}")));
        }
        Ok(Window { lo, hi })
    }

    /// `[lo, hi]^d`.
    pub fn cube(d: usize, lo: i128, hi: i128) -> Result<Self, OracleError> {
        Self::new(vec![lo; d], vec![hi; d])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> u128 {
        self.lo.iter().zip(&self.hi).fold(1u128, |acc, (l, h)| acc.saturating_mul((h - l + 1) as u128))
    }

    pub fn contains(&self, x: &[i128]) -> bool {
        x.len() == self.dim() && x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| l <= v && v <= h)
    }
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `p`-adic valuation, `None` for zero.
pub fn valuation(mut n: i128, p: i128) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    Some(k)
}

/// A polynomial over positions `0..d` of the enumeration order.
#[derive(Clone, Debug)]
pub struct Poly {
    coeffs: Vec<(usize, i128)>,
    constant: i128,
}

impl Poly {
    fn from(f: &LinearPoly, pos: &BTreeMap<Var, usize>) -> Result<Self, OracleError> {
        let coeffs = f
            .coeffs()
            .iter()
            .map(|(v, a)| Ok((pos[v], a.to_i128().ok_or(OracleError::Overflow)?)))
            .collect::<Result<_, OracleError>>()?;
        Ok(Poly { coeffs, constant: f.constant_term().to_i128().ok_or(OracleError::Overflow)? })
    }

    fn last(&self) -> usize {
        self.coeffs.iter().map(|(i, _)| *i).max().unwrap_or(0)
    }

    fn eval(&self, x: &[i128]) -> i128 {
        self.coeffs.iter().fold(self.constant, |acc, (i, a)| acc + a * x[*i])
    }
}

/// A pointwise predicate over a prefix of the coordinates.
pub enum Check {
    Le(Poly),
    Gcd(Poly, Poly, Rel, i128),
    Div(Poly, Poly),
    /// `f != 0` and `v_p(f) <= v_p(g)`.
    ModP(Poly, Poly, i128),
}

impl Check {
    fn last(&self) -> usize {
        match self {
            Check::Le(p) => p.last(),
            Check::Gcd(f, g, _, _) | Check::Div(f, g) | Check::ModP(f, g, _) => f.last().max(g.last()),
        }
    }

    fn holds(&self, x: &[i128]) -> bool {
        match self {
            Check::Le(p) => p.eval(x) <= 0,
            Check::Gcd(f, g, rel, c) => {
                let d = gcd(f.eval(x), g.eval(x));
                match rel {
                    Rel::Le => d <= *c,
                    Rel::Eq => d == *c,
                    Rel::Ne => d != *c,
                    Rel::Ge => d >= *c,
                }
            }
            Check::Div(f, g) => {
                let l = f.eval(x);
                l != 0 && g.eval(x) % l == 0
            }
            Check::ModP(f, g, p) => match (valuation(f.eval(x), *p), valuation(g.eval(x), *p)) {
                (None, _) => false,
                (Some(_), None) => true,
                (Some(a), Some(b)) => a <= b,
            },
        }
    }
}

/// Something the oracle can enumerate: a dimension and pointwise checks.
pub trait Target {
    fn dim(&self) -> usize;
    fn checks(&self) -> Result<Vec<Check>, OracleError>;
}

impl Target for IpGcdInstance {
    fn dim(&self) -> usize {
        self.num_vars()
    }

    fn checks(&self) -> Result<Vec<Check>, OracleError> {
        let pos: BTreeMap<Var, usize> = (0..self.num_vars()).map(|v| (v, v)).collect();
        let mut out = Vec::new();
        for r in &self.rows {
            out.push(Check::Le(Poly::from(&r.poly, &pos)?));
        }
        for g in &self.gcds {
            out.push(Check::Gcd(
                Poly::from(&g.f, &pos)?,
                Poly::from(&g.g, &pos)?,
                g.rel,
                g.c.to_i128().ok_or(OracleError::Overflow)?,
            ));
        }
        Ok(out)
    }
}

impl Target for DivSystem {
    fn dim(&self) -> usize {
        self.vars().len()
    }

    fn checks(&self) -> Result<Vec<Check>, OracleError> {
        let pos: BTreeMap<Var, usize> = self.vars().iter().enumerate().map(|(i, v)| (*v, i)).collect();
        self.constraints()
            .iter()
            .map(|c| Ok(Check::Div(Poly::from(&c.lhs, &pos)?, Poly::from(&c.rhs, &pos)?)))
            .collect()
    }
}

/// Visits window points in lexicographic order, pruning on each check as
/// soon as its variables are fixed; stops when `visit` returns `false`.
fn walk(checks: &[Check], w: &Window, cap: u128, visit: &mut dyn FnMut(&[i128]) -> bool) -> Result<(), OracleError> {
    let volume = w.volume();
    if volume > cap {
        return Err(OracleError::WindowTooLarge { volume, cap });
    }
    let d = w.dim();
    let mut by_depth: Vec<Vec<&Check>> = (0..d.max(1)).map(|_| Vec::new()).collect();
    for c in checks {
        by_depth[c.last().min(d.saturating_sub(1))].push(c);
    }
    if d == 0 {
        if checks.iter().all(|c| c.holds(&[])) {
            visit(&[]);
        }
        return Ok(());
    }
    let mut x = w.lo.clone();
    fn rec(i: usize, w: &Window, by_depth: &[Vec<&Check>], x: &mut Vec<i128>, visit: &mut dyn FnMut(&[i128]) -> bool) -> bool {
        let mut v = w.lo[i];
        while v <= w.hi[i] {
            x[i] = v;
            if by_depth[i].iter().all(|c| c.holds(x)) {
                let go_on = if i + 1 == w.dim() { visit(x) } else { rec(i + 1, w, by_depth, x, visit) };
                if !go_on {
                    return false;
                }
            }
            v += 1;
        }
        true
    }
    rec(0, w, &by_depth, &mut x, visit);
    Ok(())
}

/// All solutions of `target` inside `w`, lexicographically ordered. For a
/// divisibility system, coordinates follow `phi.vars()`.
pub fn enumerate_solutions<T: Target>(target: &T, w: &Window) -> Result<Vec<Vec<i128>>, OracleError> {
    enumerate_solutions_capped(target, w, DEFAULT_CAP)
}

pub fn enumerate_solutions_capped<T: Target>(target: &T, w: &Window, cap: u128) -> Result<Vec<Vec<i128>>, OracleError> {
    check_dim(target, w)?;
    let mut out = Vec::new();
    walk(&target.checks()?, w, cap, &mut |x| {
        out.push(x.to_vec());
        true
    })?;
    Ok(out)
}

/// The lexicographically first solution in `w`.
pub fn first_solution<T: Target>(target: &T, w: &Window) -> Result<Option<Vec<i128>>, OracleError> {
    check_dim(target, w)?;
    let mut out = None;
    walk(&target.checks()?, w, DEFAULT_CAP, &mut |x| {
        out = Some(x.to_vec());
        false
    })?;
    Ok(out)
}

fn check_dim<T: Target>(target: &T, w: &Window) -> Result<(), OracleError> {
    if target.dim() != w.dim() {
        return Err(OracleError::InvalidWindow(format!("window has {} coordinates, target {}", w.dim(), target.dim())));
    }
    Ok(())
}

/// Least objective value (in the instance's own sense: smallest for
/// minimization, largest for maximization) over the window, with the
/// lexicographically first point attaining it.
pub fn best_in_window(inst: &IpGcdInstance, w: &Window) -> Result<Option<(Vec<i128>, i128)>, OracleError> {
    let obj = inst.objective.as_ref().ok_or_else(|| OracleError::InvalidWindow("instance has no objective".into()))?;
    let pos: BTreeMap<Var, usize> = (0..inst.num_vars()).map(|v| (v, v)).collect();
    let cost = Poly::from(&obj.poly, &pos)?;
    let maximize = obj.sense == ipgcd::Sense::Maximize;
    let mut best: Option<(Vec<i128>, i128)> = None;
    check_dim(inst, w)?;
    walk(&inst.checks()?, w, DEFAULT_CAP, &mut |x| {
        let v = cost.eval(x);
        let better = best.as_ref().is_none_or(|(_, b)| if maximize { v > *b } else { v < *b });
        if better {
            best = Some((x.to_vec(), v));
        }
        true
    })?;
    Ok(best)
}

/// A solution of `phi` modulo `p` among residues `[0, p^k)` per variable,
/// first in lexicographic order; keys are the variables of `phi`.
///
/// # Errors
/// `WindowTooLarge` when `p^k` times the variable count exceeds `cap`.
pub fn enumerate_mod_p(phi: &DivSystem, p: i128, k: u32, cap: u128) -> Result<Option<BTreeMap<Var, i128>>, OracleError> {
    let m = p.checked_pow(k).ok_or(OracleError::Overflow)?;
    let d = phi.vars().len();
    let size = (m as u128).saturating_mul(d as u128);
    if size > cap {
        return Err(OracleError::WindowTooLarge { volume: size, cap });
    }
    let w = Window::cube(d, 0, m - 1)?;
    let pos: BTreeMap<Var, usize> = phi.vars().iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let checks: Vec<Check> = phi
        .constraints()
        .iter()
        .map(|c| Ok(Check::ModP(Poly::from(&c.lhs, &pos)?, Poly::from(&c.rhs, &pos)?, p)))
        .collect::<Result<_, OracleError>>()?;
    let mut found = None;
    walk(&checks, &w, u128::MAX, &mut |x| {
        found = Some(phi.vars().iter().copied().zip(x.iter().copied()).collect());
        false
    })?;
    Ok(found)
}

/// Whether `values` is a solution of `phi` modulo `p`, checked in `i128`.
pub fn is_mod_p_witness(phi: &DivSystem, p: i128, values: &BTreeMap<Var, BigInt>) -> Result<bool, OracleError> {
    let pos: BTreeMap<Var, usize> = phi.vars().iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let x: Vec<i128> = phi
        .vars()
        .iter()
        .map(|v| values.get(v).and_then(|a| a.to_i128()).ok_or(OracleError::Overflow))
        .collect::<Result<_, _>>()?;
    for c in phi.constraints() {
        if !Check::ModP(Poly::from(&c.lhs, &pos)?, Poly::from(&c.rhs, &pos)?, p).holds(&x) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_values() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(-12, 18), 6);
        assert_eq!(gcd(0, -7), 7);
        assert_eq!(gcd(0, 0), 0);
    }

    #[test]
    fn valuation_values() {
        assert_eq!(valuation(24, 2), Some(3));
        assert_eq!(valuation(-45, 3), Some(2));
        assert_eq!(valuation(7, 5), Some(0));
        assert_eq!(valuation(0, 2), None);
    }

    #[test]
    fn window_shape() {
        let w = Window::new(vec![-1, 0], vec![1, 4]).unwrap();
        assert_eq!(w.volume(), 15);
        assert!(w.contains(&[0, 4]));
        assert!(!w.contains(&[2, 0]));
        assert!(Window::new(vec![1], vec![0]).is_err());
    }
}
